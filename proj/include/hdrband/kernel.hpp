#pragma once

#include <array>

namespace hdrband {

//! Highest derivative order of the Gaussian kernel the library supports.
inline constexpr int kMaxKernelDerivative = 12;

//! r-th derivative of the standard normal density, computed from the
//! probabilists' Hermite recurrence: phi^(r)(x) = (-1)^r He_r(x) phi(x).
//! Throws std::invalid_argument unless 0 <= r <= 12.
double gaussian_derivative(int r, double x);

struct KernelConstants {
  //! R(K) = int K^2.
  double roughness;
  //! mu_2(K) = int x^2 K.
  double second_moment;
  //! phi^(r)(0) for r = 0..12 (zero for odd r).
  std::array<double, kMaxKernelDerivative + 1> derivative_at_zero;

  double at_zero(int r) const;
};

//! Constants of the Gaussian kernel K = phi.
const KernelConstants& kernel_constants();

}  // namespace hdrband
