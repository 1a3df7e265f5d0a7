#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "hdrband/sample.hpp"

namespace hdrband {

//! Uniform grid lo = x_0 < ... < x_{count-1} = hi, optionally carrying
//! linear-binned observation counts.
struct EvaluationGrid {
  double lo = 0.0;
  double hi = 1.0;
  std::size_t count = 2;
  std::vector<double> bin_weights;

  //! Throws std::invalid_argument unless lo < hi and count >= 2.
  static EvaluationGrid uniform(double lo, double hi, std::size_t count);

  double step() const { return (hi - lo) / static_cast<double>(count - 1); }
  double point(std::size_t i) const;
  std::vector<double> points() const;
  bool binned() const { return !bin_weights.empty(); }
};

//! Grid of `count` points over [min - 6 h_ref, max + 6 h_ref].
EvaluationGrid default_grid(const Sample& s, double h_ref, std::size_t count = 1024);

//! f^(order)(x) = (n h^(order+1))^-1 sum_i phi^(order)((x - X_i)/h) by direct
//! summation. Throws std::invalid_argument for h <= 0, order outside
//! {0,1,2} or an empty point list.
std::vector<double> kde_evaluate(const Sample& s, double h, int order,
                                 std::span<const double> points);
double kde_evaluate(const Sample& s, double h, int order, double x);

//! Splits each observation's unit mass between its two neighbouring grid
//! points in proportion to proximity. Throws std::invalid_argument if an
//! observation lies outside [lo, hi].
EvaluationGrid linear_bin(const Sample& s, EvaluationGrid grid);

struct DensityCurve {
  EvaluationGrid grid;
  int order = 0;
  double bandwidth = 0.0;
  std::vector<double> values;

  double x(std::size_t i) const { return grid.point(i); }
  double max_value() const;
  //! Trapezoid rule over the grid.
  double integral() const;
};

//! Header `x,value`, then one row per grid point.
void write_csv(std::ostream& os, const DensityCurve& curve);

//! Estimate of f^(order) on the grid. The binned path convolves the bin
//! weights with the kernel derivative sampled at multiples of the grid step,
//! dropping lags beyond 6h; it bins the sample itself if the grid carries no
//! weights.
DensityCurve kde_on_grid(const Sample& s, double h, int order, const EvaluationGrid& grid,
                         bool binned);

}  // namespace hdrband
