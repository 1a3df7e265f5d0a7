#include "hdrband/sample.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hdrband {

Sample::Sample(std::vector<double> values) : values_(std::move(values)) {
  for (double v : values_)
    if (!std::isfinite(v)) throw std::invalid_argument("sample contains a non-finite value");
  std::sort(values_.begin(), values_.end());
}

Sample Sample::affine(double shift, double scale) const {
  if (!(scale > 0)) throw std::invalid_argument("affine scale must be positive");
  std::vector<double> out(values_.size());
  std::transform(values_.begin(), values_.end(), out.begin(),
                 [&](double v) { return shift + scale * v; });
  return Sample(std::move(out));
}

}  // namespace hdrband
