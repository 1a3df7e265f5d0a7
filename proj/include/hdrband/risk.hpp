#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include <json.hpp>

#include "hdrband/kernel.hpp"
#include "hdrband/models.hpp"

namespace hdrband {

//! Coefficients of the leading-order expansion of E mu_f(R_hat ^ R_tau),
//! indexed by crossing j = 1..2r (stored 0-based).
struct RiskCoefficients {
  double f_tau = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
  std::vector<double> d3;
  std::vector<double> b1;
  std::vector<double> b2;
  std::vector<double> b3;
  //! Number of crossings whose variance term R(K) f_tau - 2 D3_j + D2 was
  //! clamped to 1e-12.
  std::size_t clamped = 0;

  std::size_t size() const { return b1.size(); }
};

void to_json(nlohmann::json& j, const RiskCoefficients& rc);

enum class VarianceClamp { off, on };

//! D1, D2, D3_j and B1_j, B2_j, B3_j from the level and the crossing slopes
//! and curvatures. Crossings are consumed in order x_1 < ... < x_2r; the
//! D1 slope-difference term pairs (x_{2j-1}, x_{2j}).
//!
//! The variance term R(K) f_tau - 2 D3_j + D2 is a limiting variance and so
//! positive for a true density. With VarianceClamp::on (for estimated inputs)
//! nonpositive values are replaced by 1e-12 and counted; with
//! VarianceClamp::off they raise std::domain_error.
//!
//! Throws std::invalid_argument for an odd or empty crossing list, a zero
//! slope, or slopes that do not alternate +,-,+,-.
RiskCoefficients risk_coefficients(double level, std::span<const Crossing> crossings,
                                   const KernelConstants& constants = kernel_constants(),
                                   VarianceClamp clamp = VarianceClamp::off);

//! sum_j B1_j phi(B2_j n^1/2 h^5/2) / (nh)^1/2 + B3_j h^2 (2 Phi(B2_j n^1/2 h^5/2) - 1)
double asymptotic_risk_in_h(double h, double n, const RiskCoefficients& rc);

//! AR(c) = n^-2/5 sum_j [B1_j c^-1/2 phi(B2_j c^5/2) + B3_j c^2 (2 Phi(B2_j c^5/2) - 1)],
//! the risk at h = c n^-1/5.
double asymptotic_risk_ar(double c, double n, const RiskCoefficients& rc);

struct ArMinimum {
  double c_opt = 0.0;
  double value = 0.0;
  //! Interior local minima seen on the coarse grid.
  std::size_t local_minima = 0;
  bool multimodal = false;
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
};

void to_json(nlohmann::json& j, const ArMinimum& m);

//! Global minimizer of AR over c in [reference_c / 100, 100 reference_c]:
//! a 512-point log grid locates the best cell and bisect_minimize refines
//! it. Without a reference, (sum B1 / sum B3)^(2/5) is used, the c at which
//! the variance and bias scales balance. Throws std::domain_error when no j
//! has both B2_j and B3_j positive or the grid minimum sits on the bracket
//! boundary.
ArMinimum minimize_ar(double n, const RiskCoefficients& rc,
                      std::optional<double> reference_c = std::nullopt);

struct MonteCarloEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t replications = 0;
};

struct RiskCurvePoint {
  double h = 0.0;
  double asymptotic = 0.0;
  std::optional<MonteCarloEstimate> monte_carlo;
};

struct MonteCarloConfig {
  std::size_t grid_points = 2048;
  //! 0: HDRBAND_THREADS or hardware concurrency.
  unsigned threads = 0;
};

//! mu_f(R_hat_h ^ R_tau) for every h on the sample of replication `rep`.
//! The sample depends only on (seed, rep).
std::vector<double> replication_errors(const NormalMixture& m, std::size_t n,
                                       const HdrOracle& oracle, std::span<const double> h_values,
                                       std::uint64_t seed, std::size_t rep,
                                       std::size_t grid_points = 2048);

//! Monte Carlo risk (mean over M replications, with standard error) next to
//! the asymptotic approximation built from the exact HDR of m. Every h is
//! evaluated on the same M samples.
std::vector<RiskCurvePoint> monte_carlo_risk(const NormalMixture& m, std::size_t n, double tau,
                                             std::span<const double> h_values, std::size_t M,
                                             std::uint64_t seed,
                                             const MonteCarloConfig& config = {});

//! Header `h,asym,mc_mean,mc_se`; the Monte Carlo columns are empty when
//! absent.
void write_risk_curve_csv(std::ostream& os, std::span<const RiskCurvePoint> points);

}  // namespace hdrband
