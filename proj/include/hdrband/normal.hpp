#pragma once

#include <cmath>
#include <numbers>

namespace hdrband {

inline constexpr double kInvSqrt2Pi = 0.39894228040143267793994605993438;

//! Standard normal density.
inline double norm_pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

//! Standard normal distribution function. erfc keeps full relative accuracy
//! in the lower tail, where 1 + erf(x) would cancel.
inline double norm_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

}  // namespace hdrband
