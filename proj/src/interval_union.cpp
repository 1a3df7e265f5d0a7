#include "hdrband/interval_union.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace hdrband {

IntervalUnion::IntervalUnion(std::vector<Interval> intervals) {
  for (const auto& iv : intervals) {
    if (!std::isfinite(iv.lo) || !std::isfinite(iv.hi))
      throw std::invalid_argument("interval endpoints must be finite");
    if (iv.lo > iv.hi) throw std::invalid_argument("interval with lo > hi");
  }
  std::sort(intervals.begin(), intervals.end(),
            [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  for (const auto& iv : intervals) {
    if (!intervals_.empty() && iv.lo <= intervals_.back().hi)
      intervals_.back().hi = std::max(intervals_.back().hi, iv.hi);
    else
      intervals_.push_back(iv);
  }
}

double IntervalUnion::length() const {
  double total = 0.0;
  for (const auto& iv : intervals_) total += iv.length();
  return total;
}

bool IntervalUnion::contains(double x) const {
  auto it = std::upper_bound(intervals_.begin(), intervals_.end(), x,
                             [](double v, const Interval& iv) { return v < iv.lo; });
  return it != intervals_.begin() && x <= std::prev(it)->hi;
}

IntervalUnion IntervalUnion::symmetric_difference(const IntervalUnion& other) const {
  // Sweep over the merged boundary list; a point is in the result when it is
  // covered by exactly one operand. Both operands are treated identically so
  // A^B and B^A produce the same boundaries.
  std::vector<double> cuts;
  cuts.reserve(2 * (size() + other.size()));
  for (const auto& iv : intervals_) cuts.insert(cuts.end(), {iv.lo, iv.hi});
  for (const auto& iv : other.intervals_) cuts.insert(cuts.end(), {iv.lo, iv.hi});
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  std::vector<Interval> out;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double a = cuts[k];
    const double b = cuts[k + 1];
    const double mid = a + 0.5 * (b - a);
    if (contains(mid) != other.contains(mid)) {
      if (!out.empty() && out.back().hi == a)
        out.back().hi = b;
      else
        out.push_back({a, b});
    }
  }
  IntervalUnion result;
  result.intervals_ = std::move(out);
  return result;
}

void to_json(nlohmann::json& j, const IntervalUnion& u) {
  j = nlohmann::json::array();
  for (const auto& iv : u.intervals()) j.push_back({iv.lo, iv.hi});
}

void from_json(const nlohmann::json& j, IntervalUnion& u) {
  std::vector<Interval> v;
  for (const auto& row : j) v.push_back({row.at(0).get<double>(), row.at(1).get<double>()});
  u = IntervalUnion(std::move(v));
}

void write_csv(std::ostream& os, const IntervalUnion& u) {
  os << "lo,hi\n";
  const auto old = os.precision(17);
  for (const auto& iv : u.intervals()) os << iv.lo << ',' << iv.hi << '\n';
  os.precision(old);
}

}  // namespace hdrband
