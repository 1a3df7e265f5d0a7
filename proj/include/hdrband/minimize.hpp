#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace hdrband {

//! Golden-section search for a minimum of a unimodal f on [a, b]. Stops when
//! the bracket width falls below rel_tol * |midpoint| (absolute for a
//! midpoint near zero).
template <class F>
double golden_section_minimize(F&& f, double a, double b, double rel_tol = 1e-10,
                               int max_iterations = 500) {
  constexpr double inv_phi = 0.61803398874989484820;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  for (int i = 0; i < max_iterations; ++i) {
    if (std::abs(b - a) <= rel_tol * std::max(1.0, std::abs(0.5 * (a + b)))) break;
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return fc < fd ? c : d;
}

//! Minimum of a smooth f on [a, b] as the sign change of the symmetric
//! difference f(t + step) - f(t - step), found by bisection. Falls back to
//! golden-section search when that difference does not change sign on [a, b].
template <class F>
double bisect_minimize(F&& f, double a, double b, double step, int max_iterations = 200) {
  auto slope = [&](double t) { return f(t + step) - f(t - step); };
  if (!(slope(a) < 0 && slope(b) > 0)) return golden_section_minimize(f, a, b, 1e-12);
  for (int i = 0; i < max_iterations; ++i) {
    const double mid = 0.5 * (a + b);
    if (!(mid > a && mid < b)) break;
    (slope(mid) < 0 ? a : b) = mid;
  }
  return 0.5 * (a + b);
}

//! `count` log-spaced points from lo to hi inclusive.
inline std::vector<double> log_grid(double lo, double hi, std::size_t count) {
  if (!(lo > 0) || !(hi > lo) || count < 2) throw std::invalid_argument("bad log grid");
  std::vector<double> out(count);
  const double step = std::log(hi / lo) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) out[i] = lo * std::exp(step * static_cast<double>(i));
  out.back() = hi;
  return out;
}

//! Indices of strict interior local minima of a tabulated function.
inline std::vector<std::size_t> interior_local_minima(const std::vector<double>& values) {
  std::vector<std::size_t> out;
  for (std::size_t i = 1; i + 1 < values.size(); ++i) {
    if (values[i] < values[i - 1] && values[i] <= values[i + 1]) out.push_back(i);
  }
  return out;
}

}  // namespace hdrband
