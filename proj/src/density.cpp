#include "hdrband/density.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "hdrband/kernel.hpp"

namespace hdrband {

namespace {

void check_estimation_args(const Sample& s, double h, int order) {
  if (s.empty()) throw std::invalid_argument("kernel estimate of an empty sample");
  if (!(h > 0) || !std::isfinite(h)) throw std::invalid_argument("bandwidth must be positive");
  if (order < 0 || order > 2) throw std::invalid_argument("estimate order must be 0, 1 or 2");
}

// Lags beyond this many bandwidths are dropped in the binned convolution.
// The omitted Gaussian tail mass is below 2e-9.
constexpr double kTruncation = 6.0;

}  // namespace

EvaluationGrid EvaluationGrid::uniform(double lo, double hi, std::size_t count) {
  if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi))
    throw std::invalid_argument("grid needs finite lo < hi");
  if (count < 2) throw std::invalid_argument("grid needs at least two points");
  return EvaluationGrid{lo, hi, count, {}};
}

double EvaluationGrid::point(std::size_t i) const {
  if (i + 1 == count) return hi;
  return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
}

std::vector<double> EvaluationGrid::points() const {
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) out[i] = point(i);
  return out;
}

EvaluationGrid default_grid(const Sample& s, double h_ref, std::size_t count) {
  if (s.empty()) throw std::invalid_argument("grid for an empty sample");
  if (!(h_ref > 0)) throw std::invalid_argument("reference bandwidth must be positive");
  return EvaluationGrid::uniform(s.min() - kTruncation * h_ref, s.max() + kTruncation * h_ref,
                                 count);
}

std::vector<double> kde_evaluate(const Sample& s, double h, int order,
                                 std::span<const double> points) {
  check_estimation_args(s, h, order);
  if (points.empty()) throw std::invalid_argument("no evaluation points");
  const double scale = 1.0 / (static_cast<double>(s.size()) * std::pow(h, order + 1));
  std::vector<double> out(points.size());
  for (std::size_t k = 0; k < points.size(); ++k) {
    double sum = 0.0;
    for (double xi : s.values()) sum += gaussian_derivative(order, (points[k] - xi) / h);
    out[k] = sum * scale;
  }
  return out;
}

double kde_evaluate(const Sample& s, double h, int order, double x) {
  return kde_evaluate(s, h, order, std::span<const double>(&x, 1)).front();
}

EvaluationGrid linear_bin(const Sample& s, EvaluationGrid grid) {
  if (!s.empty() && (s.min() < grid.lo || s.max() > grid.hi))
    throw std::invalid_argument("observation outside the binning grid");
  grid.bin_weights.assign(grid.count, 0.0);
  const double delta = grid.step();
  for (double x : s.values()) {
    const double t = (x - grid.lo) / delta;
    auto k = static_cast<std::size_t>(std::floor(t));
    if (k >= grid.count - 1) {
      grid.bin_weights[grid.count - 1] += 1.0;
      continue;
    }
    const double frac = t - static_cast<double>(k);
    grid.bin_weights[k] += 1.0 - frac;
    grid.bin_weights[k + 1] += frac;
  }
  return grid;
}

double DensityCurve::max_value() const { return *std::max_element(values.begin(), values.end()); }

double DensityCurve::integral() const {
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < values.size(); ++i) sum += values[i] + values[i + 1];
  return 0.5 * grid.step() * sum;
}

void write_csv(std::ostream& os, const DensityCurve& curve) {
  os << "x,value\n";
  const auto old = os.precision(17);
  for (std::size_t i = 0; i < curve.values.size(); ++i) os << curve.x(i) << ',' << curve.values[i] << '\n';
  os.precision(old);
}

DensityCurve kde_on_grid(const Sample& s, double h, int order, const EvaluationGrid& grid,
                         bool binned) {
  check_estimation_args(s, h, order);
  DensityCurve curve{grid, order, h, {}};
  if (!binned) {
    curve.values = kde_evaluate(s, h, order, grid.points());
    return curve;
  }
  if (!curve.grid.binned()) curve.grid = linear_bin(s, grid);
  const auto& w = curve.grid.bin_weights;
  const std::size_t m = grid.count;
  const double delta = grid.step();
  const auto lags = std::min<std::size_t>(
      m - 1, static_cast<std::size_t>(std::floor(kTruncation * h / delta)));
  // Kernel sampled at l * delta for l = -lags..lags, index l + lags.
  std::vector<double> kernel(2 * lags + 1);
  for (std::size_t l = 0; l <= 2 * lags; ++l) {
    const double u = (static_cast<double>(l) - static_cast<double>(lags)) * delta / h;
    kernel[l] = gaussian_derivative(order, u);
  }
  const double scale = 1.0 / (static_cast<double>(s.size()) * std::pow(h, order + 1));
  curve.values.assign(m, 0.0);
  // values[k] = sum_j w[j] K((k - j) delta / h); fixed summation order per k.
  for (std::size_t k = 0; k < m; ++k) {
    const std::size_t j_lo = k > lags ? k - lags : 0;
    const std::size_t j_hi = std::min(m - 1, k + lags);
    double sum = 0.0;
    for (std::size_t j = j_lo; j <= j_hi; ++j) sum += w[j] * kernel[k - j + lags];
    curve.values[k] = sum * scale;
  }
  return curve;
}

}  // namespace hdrband
