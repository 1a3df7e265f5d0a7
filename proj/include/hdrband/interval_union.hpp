#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include <json.hpp>

namespace hdrband {

struct Interval {
  double lo;
  double hi;

  double length() const { return hi - lo; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

//! Finite union of disjoint closed intervals, kept sorted with overlapping
//! or touching pieces merged.
class IntervalUnion {
 public:
  IntervalUnion() = default;
  //! Canonicalizes arbitrary input. Throws std::invalid_argument if some
  //! interval has lo > hi or a non-finite endpoint.
  explicit IntervalUnion(std::vector<Interval> intervals);

  std::span<const Interval> intervals() const { return intervals_; }
  std::size_t size() const { return intervals_.size(); }
  bool empty() const { return intervals_.empty(); }
  const Interval& operator[](std::size_t i) const { return intervals_[i]; }

  double length() const;
  bool contains(double x) const;

  //! Points in exactly one of the two unions. Zero-length pieces are dropped.
  IntervalUnion symmetric_difference(const IntervalUnion& other) const;

  friend bool operator==(const IntervalUnion&, const IntervalUnion&) = default;

 private:
  std::vector<Interval> intervals_;
};

//! [[a,b],...]
void to_json(nlohmann::json& j, const IntervalUnion& u);
void from_json(const nlohmann::json& j, IntervalUnion& u);

//! Header `lo,hi`, then one row per interval.
void write_csv(std::ostream& os, const IntervalUnion& u);

}  // namespace hdrband
