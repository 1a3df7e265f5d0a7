#include "hdrband/risk.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>

#include "hdrband/hdr.hpp"
#include "hdrband/minimize.hpp"
#include "hdrband/normal.hpp"
#include "hdrband/parallel.hpp"
#include "hdrband/rng.hpp"

namespace hdrband {

void to_json(nlohmann::json& j, const RiskCoefficients& rc) {
  j = {{"f_tau", rc.f_tau}, {"d1", rc.d1}, {"d2", rc.d2}, {"d3", rc.d3},
       {"b1", rc.b1},       {"b2", rc.b2}, {"b3", rc.b3}, {"clamped", rc.clamped}};
}

RiskCoefficients risk_coefficients(double level, std::span<const Crossing> crossings,
                                   const KernelConstants& constants, VarianceClamp clamp) {
  const std::size_t count = crossings.size();
  if (count == 0 || count % 2 != 0)
    throw std::invalid_argument("risk coefficients need an even, nonzero number of crossings");
  if (!(level > 0)) throw std::invalid_argument("level must be positive");
  for (std::size_t j = 0; j < count; ++j) {
    const double slope = crossings[j].slope;
    if (slope == 0.0) throw std::invalid_argument("zero slope at a crossing");
    if ((j % 2 == 0) != (slope > 0))
      throw std::invalid_argument("crossing slopes must alternate +,-,+,-");
  }
  const double rk = constants.roughness;
  const double mu2 = constants.second_moment;

  double inv_slope_sum = 0.0;
  double curvature_sum = 0.0;
  double inv_slope_sq_sum = 0.0;
  for (const auto& c : crossings) {
    const double a = std::abs(c.slope);
    inv_slope_sum += 1.0 / a;
    curvature_sum += c.curvature / a;
    inv_slope_sq_sum += 1.0 / (c.slope * c.slope);
  }
  double slope_gap_sum = 0.0;
  for (std::size_t j = 0; j + 1 < count; j += 2)
    slope_gap_sum += crossings[j + 1].slope - crossings[j].slope;

  RiskCoefficients rc;
  rc.f_tau = level;
  rc.d1 = 0.5 * mu2 / inv_slope_sum * (curvature_sum + slope_gap_sum / level);
  rc.d2 = rk * level * inv_slope_sq_sum / (inv_slope_sum * inv_slope_sum);
  for (const auto& c : crossings) {
    const double a = std::abs(c.slope);
    const double d3 = rk * level / (a * inv_slope_sum);
    double variance = rk * level - 2.0 * d3 + rc.d2;
    if (!(variance > 0)) {
      if (clamp == VarianceClamp::off)
        throw std::domain_error("nonpositive variance term in risk coefficients");
      variance = 1e-12;
      ++rc.clamped;
    }
    const double bias = std::abs(0.5 * mu2 * c.curvature - rc.d1);
    const double sd = std::sqrt(variance);
    rc.d3.push_back(d3);
    rc.b1.push_back(2.0 * level * sd / a);
    rc.b2.push_back(bias / sd);
    rc.b3.push_back(level * bias / a);
  }
  return rc;
}

double asymptotic_risk_in_h(double h, double n, const RiskCoefficients& rc) {
  const double root_n_h5 = std::sqrt(n) * std::pow(h, 2.5);
  const double root_nh = std::sqrt(n * h);
  double total = 0.0;
  for (std::size_t j = 0; j < rc.size(); ++j) {
    const double arg = rc.b2[j] * root_n_h5;
    total += rc.b1[j] * norm_pdf(arg) / root_nh + rc.b3[j] * h * h * (2.0 * norm_cdf(arg) - 1.0);
  }
  return total;
}

double asymptotic_risk_ar(double c, double n, const RiskCoefficients& rc) {
  const double c52 = std::pow(c, 2.5);
  double total = 0.0;
  for (std::size_t j = 0; j < rc.size(); ++j) {
    const double arg = rc.b2[j] * c52;
    total += rc.b1[j] / std::sqrt(c) * norm_pdf(arg) + rc.b3[j] * c * c * (2.0 * norm_cdf(arg) - 1.0);
  }
  return total / std::pow(n, 0.4);
}

void to_json(nlohmann::json& j, const ArMinimum& m) {
  j = {{"c_opt", m.c_opt},
       {"value", m.value},
       {"local_minima", m.local_minima},
       {"multimodal", m.multimodal},
       {"bracket", {m.bracket_lo, m.bracket_hi}}};
}

ArMinimum minimize_ar(double n, const RiskCoefficients& rc, std::optional<double> reference_c) {
  bool interior = false;
  double b1_sum = 0.0;
  double b3_sum = 0.0;
  for (std::size_t j = 0; j < rc.size(); ++j) {
    interior = interior || (rc.b2[j] > 0 && rc.b3[j] > 0);
    b1_sum += rc.b1[j];
    b3_sum += rc.b3[j];
  }
  if (!interior)
    throw std::domain_error("asymptotic risk has no interior minimum: no crossing with B2, B3 > 0");
  const double ref = reference_c.value_or(std::pow(b1_sum / b3_sum, 0.4));
  if (!(ref > 0) || !std::isfinite(ref))
    throw std::invalid_argument("reference c must be positive and finite");

  ArMinimum out;
  out.bracket_lo = ref / 100.0;
  out.bracket_hi = ref * 100.0;
  const auto cs = log_grid(out.bracket_lo, out.bracket_hi, 512);
  std::vector<double> values(cs.size());
  for (std::size_t i = 0; i < cs.size(); ++i) values[i] = asymptotic_risk_ar(cs[i], n, rc);
  const auto best = static_cast<std::size_t>(std::min_element(values.begin(), values.end()) -
                                             values.begin());
  if (best == 0 || best + 1 == cs.size())
    throw std::domain_error("asymptotic risk minimum on the bracket boundary [" +
                            std::to_string(out.bracket_lo) + ", " +
                            std::to_string(out.bracket_hi) + "] at c = " + std::to_string(cs[best]));
  out.local_minima = interior_local_minima(values).size();
  out.multimodal = out.local_minima > 1;
  const double log_c = bisect_minimize(
      [&](double t) { return asymptotic_risk_ar(std::exp(t), n, rc); }, std::log(cs[best - 1]),
      std::log(cs[best + 1]), 1e-4);
  out.c_opt = std::exp(log_c);
  out.value = asymptotic_risk_ar(out.c_opt, n, rc);
  return out;
}

std::vector<double> replication_errors(const NormalMixture& m, std::size_t n,
                                       const HdrOracle& oracle, std::span<const double> h_values,
                                       std::uint64_t seed, std::size_t rep,
                                       std::size_t grid_points) {
  const Sample s = m.sample(n, derive_seed(seed, rep));
  std::vector<double> errors;
  errors.reserve(h_values.size());
  for (double h : h_values) {
    const RegionEstimate est = estimate_region(s, h, oracle.tau, grid_points);
    errors.push_back(symmetric_difference_mass(est.region, oracle.region, m));
  }
  return errors;
}

std::vector<RiskCurvePoint> monte_carlo_risk(const NormalMixture& m, std::size_t n, double tau,
                                             std::span<const double> h_values, std::size_t M,
                                             std::uint64_t seed, const MonteCarloConfig& config) {
  if (M == 0) throw std::invalid_argument("Monte Carlo size M must be at least 1");
  if (n < 2) throw std::invalid_argument("sample size must be at least 2");
  if (h_values.empty()) throw std::invalid_argument("no bandwidths given");
  for (double h : h_values)
    if (!(h > 0)) throw std::invalid_argument("bandwidths must be positive");

  const HdrOracle oracle = hdr_oracle(m, tau);
  const RiskCoefficients rc = risk_coefficients(oracle.level, oracle.crossings);

  std::vector<std::vector<double>> errors(M);
  parallel_for(M, config.threads, [&](std::size_t rep) {
    errors[rep] = replication_errors(m, n, oracle, h_values, seed, rep, config.grid_points);
  });

  std::vector<RiskCurvePoint> out;
  for (std::size_t k = 0; k < h_values.size(); ++k) {
    double sum = 0.0;
    for (const auto& e : errors) sum += e[k];
    const double mean = sum / static_cast<double>(M);
    double ss = 0.0;
    for (const auto& e : errors) ss += (e[k] - mean) * (e[k] - mean);
    const double se = M > 1 ? std::sqrt(ss / static_cast<double>(M - 1) / static_cast<double>(M)) : 0.0;
    out.push_back({h_values[k], asymptotic_risk_in_h(h_values[k], static_cast<double>(n), rc),
                   MonteCarloEstimate{mean, se, M}});
  }
  return out;
}

void write_risk_curve_csv(std::ostream& os, std::span<const RiskCurvePoint> points) {
  os << "h,asym,mc_mean,mc_se\n";
  const auto old = os.precision(17);
  for (const auto& p : points) {
    os << p.h << ',' << p.asymptotic << ',';
    if (p.monte_carlo) os << p.monte_carlo->mean << ',' << p.monte_carlo->std_error;
    else os << ',';
    os << '\n';
  }
  os.precision(old);
}

}  // namespace hdrband
