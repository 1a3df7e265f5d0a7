#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "hdrband/hdr.hpp"
#include "hdrband/risk.hpp"
#include "hdrband/sample.hpp"

namespace hdrband {

//! min(sample sd, IQR / 1.349), quartiles interpolated linearly between order
//! statistics. Throws std::invalid_argument for n < 4 or a zero scale.
double robust_scale(const Sample& s);

//! psi_r = int f^(r) f under a N(mu, sigma^2) density:
//! (-1)^(r/2) r! / ((2 sigma)^(r+1) (r/2)! sqrt(pi)). r even in [4, 12].
double psi_normal_scale(int r, double sigma);

//! Linear-binned pair structure of a sample: bin counts on a uniform grid
//! over [min, max] and their autocorrelation A(d) = sum_k c_k c_{k+d}.
//! Any pairwise kernel sum sum_i sum_j K(X_i - X_j) is then approximated by
//! sum_d A(d) K(d delta) in O(bins).
class BinnedPairs {
 public:
  explicit BinnedPairs(const Sample& s, std::size_t bins = 4096);

  std::size_t n() const { return n_; }
  double step() const { return delta_; }

  //! Approximates sum_i sum_j kernel(X_i - X_j) for an even kernel; lags
  //! beyond `cutoff` are dropped.
  template <class Kernel>
  double pair_sum(Kernel&& kernel, double cutoff) const {
    double total = lag_counts_[0] * kernel(0.0);
    for (std::size_t d = 1; d < lag_counts_.size(); ++d) {
      const double dist = static_cast<double>(d) * delta_;
      if (dist > cutoff) break;
      if (lag_counts_[d] != 0.0) total += 2.0 * lag_counts_[d] * kernel(dist);
    }
    return total;
  }

  //! Binned psi_r(g).
  double psi(int r, double g) const;

 private:
  std::size_t n_ = 0;
  double delta_ = 0.0;
  std::vector<double> lag_counts_;
};

//! psi_hat_r(g) = n^-2 g^(-r-1) sum_i sum_j phi^(r)((X_i - X_j) / g), diagonal
//! included. Exact double sum or the binned approximation. r even in [2, 10].
double psi_kernel_estimate(const Sample& s, int r, double g, bool binned = false,
                           std::size_t bins = 4096);

enum class ConstantConvention {
  //! -2 L^(r)(0) with L = phi, including the 1/sqrt(2 pi) factor.
  exact,
  //! The integer constants 6, 30, 210, 1890 without the 1/sqrt(2 pi) factor,
  //! reproducing the printed pilot-bandwidth formulas digit for digit.
  paper_literal,
};

//! MSE-optimal bandwidth for psi_hat_r(g):
//! [-2 L^(r)(0) / (n psi_{r+2} mu_2(L))]^(1/(r+3)). Throws std::domain_error
//! if the radicand is not positive.
double optimal_functional_bandwidth(int r, double psi_next, double n,
                                    ConstantConvention convention = ConstantConvention::exact);

//! Thrown when a psi estimate has the sign opposite to the one its plug-in
//! formula requires.
class PsiSignError : public std::domain_error {
 public:
  PsiSignError(int r, double psi)
      : std::domain_error("psi_" + std::to_string(r) + " estimate " + std::to_string(psi) +
                          " has the wrong sign"),
        r_(r) {}
  int r() const { return r_; }

 private:
  int r_;
};

//! AMISE-optimal bandwidth for f^(r), r in {0,1,2}, with psi_{2r+4} replaced
//! by `psi_estimate`:
//!   h0 = [1 / (2 sqrt(pi) psi_4 n)]^(1/5)
//!   h1 = [-3 / (4 sqrt(pi) psi_6 n)]^(1/7)
//!   h2 = [15 / (8 sqrt(pi) psi_8 n)]^(1/9)
//! Throws PsiSignError (carrying 2r + 4) when the radicand is not positive.
double plugin_derivative_bandwidth(int r, double psi_estimate, double n);

struct SelectorConfig {
  ConstantConvention constants = ConstantConvention::exact;
  //! Binned psi estimates and binned pilot density curve.
  bool binned = true;
  std::size_t psi_bins = 4096;
  std::size_t grid_points = 1024;
};

//! A psi_r estimate together with the bandwidth g it was computed at.
struct PsiEstimate {
  int r = 0;
  double g = 0.0;
  double value = 0.0;
  //! Wrong sign; replaced by the normal-scale value.
  bool fallback = false;
};

struct SelectorReport {
  double bandwidth = 0.0;
  double tau = 0.0;
  std::size_t n = 0;
  double sigma_hat = 0.0;
  std::map<int, double> psi_normal_scale;
  std::vector<PsiEstimate> first_stage;
  std::vector<PsiEstimate> second_stage;
  //! Values used downstream for r = 4..12.
  std::map<int, double> psi;
  double h0 = 0.0;
  double h1 = 0.0;
  double h2 = 0.0;
  CrossingSet crossings;
  RiskCoefficients coefficients;
  ArMinimum minimum;
  double c_opt_hat = 0.0;
  bool paper_literal_constants = false;
  std::vector<std::string> warnings;
};

void to_json(nlohmann::json& j, const SelectorReport& r);

//! Failure inside the plug-in pipeline; step() is the algorithm step (1-10).
class SelectorError : public std::runtime_error {
 public:
  SelectorError(int step, const std::string& what)
      : std::runtime_error("step " + std::to_string(step) + ": " + what), step_(step) {}
  int step() const { return step_; }

 private:
  int step_;
};

//! Plug-in bandwidth for estimating the 100(1 - tau)% HDR with a Gaussian
//! kernel. Throws std::invalid_argument for tau outside (0, 1), n < 50 or a
//! degenerate sample, and SelectorError for numerical failures.
SelectorReport hdr_bandwidth(const Sample& s, double tau, const SelectorConfig& config = {});

//! LSCV(h) = int f_h^2 - (2/n) sum_i f_{h,-i}(X_i), using
//! int f_h^2 = n^-2 sum_i sum_j phi_{sqrt(2) h}(X_i - X_j). Needs n >= 2.
double lscv_criterion(const Sample& s, double h);

struct LscvConfig {
  std::size_t grid_points = 50;
  //! Unset: binned pair sums for n > 5000.
  std::optional<bool> binned;
  std::size_t bins = 4096;
};

struct LscvResult {
  double bandwidth = 0.0;
  double criterion = 0.0;
  //! The minimum sits on the edge of the search range.
  bool boundary = false;
};

//! Minimizer of LSCV over a log grid on [h_os / 20, h_os], refined by
//! bisect_minimize, where h_os = 1.144 sd n^(-1/5). Throws
//! std::invalid_argument for n < 10 or a constant sample.
LscvResult lscv_bandwidth(const Sample& s, const LscvConfig& config = {});

}  // namespace hdrband
