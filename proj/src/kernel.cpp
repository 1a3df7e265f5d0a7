#include "hdrband/kernel.hpp"

#include <stdexcept>
#include <string>

#include "hdrband/normal.hpp"

namespace hdrband {

namespace {

void check_order(int r) {
  if (r < 0 || r > kMaxKernelDerivative)
    throw std::invalid_argument("kernel derivative order " + std::to_string(r) +
                                " outside [0, 12]");
}

// (-1)^(r/2) (r-1)!! / sqrt(2 pi) for even r, 0 for odd r.
constexpr std::array<double, kMaxKernelDerivative + 1> derivatives_at_zero() {
  std::array<double, kMaxKernelDerivative + 1> out{};
  double double_factorial = 1.0;
  for (int r = 0; r <= kMaxKernelDerivative; r += 2) {
    if (r >= 2) double_factorial *= r - 1;
    out[r] = ((r / 2) % 2 == 0 ? 1.0 : -1.0) * double_factorial * kInvSqrt2Pi;
  }
  return out;
}

}  // namespace

double gaussian_derivative(int r, double x) {
  check_order(r);
  double prev = 1.0;  // He_0
  double cur = x;     // He_1
  if (r == 0) {
    cur = 1.0;
  } else {
    for (int k = 1; k < r; ++k) {
      const double next = x * cur - k * prev;
      prev = cur;
      cur = next;
    }
  }
  return (r % 2 == 0 ? cur : -cur) * norm_pdf(x);
}

double KernelConstants::at_zero(int r) const {
  check_order(r);
  return derivative_at_zero[r];
}

const KernelConstants& kernel_constants() {
  // 1 / (2 sqrt(pi))
  static constexpr KernelConstants constants{0.28209479177387814347403972578039, 1.0,
                                             derivatives_at_zero()};
  return constants;
}

}  // namespace hdrband
