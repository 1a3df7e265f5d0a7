#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace hdrband {

//! Immutable, sorted set of finite real observations.
class Sample {
 public:
  Sample() = default;
  //! Sorts the values. Throws std::invalid_argument on non-finite input.
  explicit Sample(std::vector<double> values);

  std::span<const double> values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }
  double operator[](std::size_t i) const { return values_[i]; }
  double min() const { return values_.front(); }
  double max() const { return values_.back(); }

  //! a + s * X for s > 0.
  Sample affine(double shift, double scale) const;

  friend bool operator==(const Sample&, const Sample&) = default;

 private:
  std::vector<double> values_;
};

}  // namespace hdrband
