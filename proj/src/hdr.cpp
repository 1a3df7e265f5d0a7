#include "hdrband/hdr.hpp"

#include <algorithm>
#include <cmath>

namespace hdrband {

namespace {

void require_density(const DensityCurve& curve) {
  if (curve.order != 0) throw std::invalid_argument("HDR needs an order-0 density curve");
  if (curve.values.size() != curve.grid.count)
    throw std::invalid_argument("curve values do not match the grid");
}

}  // namespace

double region_mass(const DensityCurve& curve, double level) {
  require_density(curve);
  const double delta = curve.grid.step();
  const auto& v = curve.values;
  double mass = 0.0;
  for (std::size_t i = 0; i + 1 < v.size(); ++i) {
    const double a = v[i];
    const double b = v[i + 1];
    if (a >= level && b >= level) {
      mass += 0.5 * delta * (a + b);
    } else if (a >= level || b >= level) {
      // Linear piece above the level over a fraction t of the cell.
      const double hi = std::max(a, b);
      const double lo = std::min(a, b);
      const double t = (hi - level) / (hi - lo);
      mass += 0.5 * t * delta * (hi + level);
    }
  }
  return mass;
}

double level_for_tau(const DensityCurve& curve, double tau) {
  require_density(curve);
  if (!(tau > 0 && tau < 1)) throw std::invalid_argument("tau must lie in (0, 1)");
  const double target = 1.0 - tau;
  double hi = curve.max_value();
  double lo = 0.0;
  if (region_mass(curve, lo) < target)
    throw std::domain_error("curve mass below 1 - tau; grid too narrow");
  double level = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    level = 0.5 * (lo + hi);
    const double mass = region_mass(curve, level);
    if (std::abs(mass - target) <= 1e-10) break;
    if (mass > target)
      lo = level;
    else
      hi = level;
    if (hi - lo <= 1e-17 * curve.max_value()) break;
  }
  return level;
}

IntervalUnion extract_region(const DensityCurve& curve, double level) {
  require_density(curve);
  const auto& v = curve.values;
  const auto& g = curve.grid;
  const double delta = g.step();
  std::vector<Interval> pieces;
  bool inside = false;
  double start = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const bool above = v[i] >= level;
    if (above && !inside) {
      start = i == 0 ? g.lo : g.point(i - 1) + delta * (level - v[i - 1]) / (v[i] - v[i - 1]);
      inside = true;
    } else if (!above && inside) {
      pieces.push_back({start, g.point(i - 1) + delta * (v[i - 1] - level) / (v[i - 1] - v[i])});
      inside = false;
    }
  }
  if (inside) pieces.push_back({start, g.hi});
  return IntervalUnion(std::move(pieces));
}

void to_json(nlohmann::json& j, const CrossingSet& c) {
  j = {{"level", c.level}, {"r", c.r}, {"crossings", c.crossings}};
}

CrossingSet find_crossings(const Sample& s, double h0, double h1, double h2, double tau,
                           const EvaluationGrid& grid) {
  if (!(h0 > 0) || !(h1 > 0) || !(h2 > 0))
    throw std::invalid_argument("pilot bandwidths must be positive");
  const DensityCurve curve = kde_on_grid(s, h0, 0, grid, grid.binned());
  const double level = level_for_tau(curve, tau);
  const IntervalUnion region = extract_region(curve, level);
  if (region.empty())
    throw CrossingError("no crossing of the estimated level", level, {});

  CrossingSet out;
  out.level = level;
  for (const auto& iv : region.intervals()) {
    for (double x : {iv.lo, iv.hi}) {
      const double f0 = kde_evaluate(s, h0, 0, x);
      const double d0 = kde_evaluate(s, h0, 1, x);
      if (d0 != 0.0) {
        const double refined = x - (f0 - level) / d0;
        // Keep the step only if it stays within a grid cell of the estimate.
        if (std::abs(refined - x) <= grid.step()) x = refined;
      }
      out.crossings.push_back({x, kde_evaluate(s, h1, 1, x), kde_evaluate(s, h2, 2, x)});
    }
  }
  out.r = out.crossings.size() / 2;
  for (std::size_t j = 0; j < out.crossings.size(); ++j) {
    const double slope = out.crossings[j].slope;
    if (j % 2 == 0 ? !(slope > 0) : !(slope < 0))
      throw CrossingError("pilot slope at crossing " + std::to_string(j + 1) +
                              " has the wrong sign (degenerate pilot)",
                          level, out.crossings);
  }
  return out;
}

double symmetric_difference_mass(const IntervalUnion& a, const IntervalUnion& b,
                                 const NormalMixture& truth) {
  const IntervalUnion diff = a.symmetric_difference(b);
  double mass = 0.0;
  for (const auto& iv : diff.intervals())
    mass += truth.cdf(iv.hi) - truth.cdf(iv.lo);
  return std::clamp(mass, 0.0, 1.0);
}

RegionEstimate estimate_region(const Sample& s, double h, double tau, std::size_t grid_points) {
  const DensityCurve curve = kde_on_grid(s, h, 0, default_grid(s, h, grid_points), true);
  const double level = level_for_tau(curve, tau);
  return {level, extract_region(curve, level)};
}

}  // namespace hdrband
