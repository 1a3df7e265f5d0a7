#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "hdrband/density.hpp"
#include "hdrband/interval_union.hpp"
#include "hdrband/models.hpp"
#include "hdrband/sample.hpp"

namespace hdrband {

//! Mass of {curve >= level} under the piecewise-linear interpolant of an
//! order-0 curve.
double region_mass(const DensityCurve& curve, double level);

//! Level y with region_mass(curve, y) = 1 - tau within 1e-9, found by
//! bisection. Throws std::invalid_argument for tau outside (0, 1) or a curve
//! of nonzero order, and std::domain_error when the curve's total mass is
//! below 1 - tau.
double level_for_tau(const DensityCurve& curve, double tau);

//! Union of intervals where the curve is at least `level`. Boundaries are
//! interpolated linearly between straddling grid points; values beyond the
//! grid count as below the level.
IntervalUnion extract_region(const DensityCurve& curve, double level);

//! Estimated level and crossings with pilot derivative estimates.
struct CrossingSet {
  double level = 0.0;
  std::vector<Crossing> crossings;
  std::size_t r = 0;
};

void to_json(nlohmann::json& j, const CrossingSet& c);

class CrossingError : public std::runtime_error {
 public:
  CrossingError(const std::string& what, double level, std::vector<Crossing> found)
      : std::runtime_error(what), level_(level), found_(std::move(found)) {}
  double level() const { return level_; }
  const std::vector<Crossing>& found() const { return found_; }

 private:
  double level_;
  std::vector<Crossing> found_;
};

//! Level of f_{h0} for tau, crossing points of that level, each refined by a
//! Newton step on the exact-sum estimate, with f'_{h1} and f''_{h2} there.
//! The f_{h0} curve is binned when the grid carries bin weights. Throws
//! CrossingError when no crossing exists or a slope has the wrong sign.
CrossingSet find_crossings(const Sample& s, double h0, double h1, double h2, double tau,
                           const EvaluationGrid& grid);

//! mu_f(A ^ B) from the mixture distribution function.
double symmetric_difference_mass(const IntervalUnion& a, const IntervalUnion& b,
                                 const NormalMixture& truth);

//! Plug-in HDR of a kernel estimate at bandwidth h.
struct RegionEstimate {
  double level;
  IntervalUnion region;
};

//! Binned order-0 estimate on default_grid(s, h, grid_points), its level for
//! tau and the extracted region.
RegionEstimate estimate_region(const Sample& s, double h, double tau,
                               std::size_t grid_points = 2048);

}  // namespace hdrband
