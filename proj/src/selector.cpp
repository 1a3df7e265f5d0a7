#include "hdrband/selector.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "hdrband/kernel.hpp"
#include "hdrband/minimize.hpp"
#include "hdrband/normal.hpp"

namespace hdrband {

namespace {

const double kSqrtPi = std::sqrt(std::numbers::pi);

// Gaussian derivative terms are exactly zero in double precision past here.
constexpr double kPairCutoff = 38.0;

void check_psi_order(int r, int max_r) {
  if (r < 2 || r > max_r || r % 2 != 0)
    throw std::invalid_argument("psi order " + std::to_string(r) + " must be even in [2, " +
                                std::to_string(max_r) + "]");
}

double quantile7(std::span<const double> sorted, double p) {
  const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

double sample_sd(std::span<const double> xs) {
  const double n = static_cast<double>(xs.size());
  const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / (n - 1.0));
}

double gaussian_scaled(double x, double sigma) { return norm_pdf(x / sigma) / sigma; }

}  // namespace

double robust_scale(const Sample& s) {
  if (s.size() < 4) throw std::invalid_argument("robust scale needs at least 4 observations");
  const auto xs = s.values();
  const double iqr = quantile7(xs, 0.75) - quantile7(xs, 0.25);
  const double scale = std::min(sample_sd(xs), iqr / 1.349);
  if (!(scale > 0)) throw std::invalid_argument("degenerate sample: zero scale estimate");
  return scale;
}

double psi_normal_scale(int r, double sigma) {
  if (r < 4 || r > 12 || r % 2 != 0)
    throw std::invalid_argument("normal-scale psi order must be even in [4, 12]");
  if (!(sigma > 0)) throw std::invalid_argument("sigma must be positive");
  // r! / (r/2)!
  double ratio = 1.0;
  for (int k = r / 2 + 1; k <= r; ++k) ratio *= k;
  const double sign = (r / 2) % 2 == 0 ? 1.0 : -1.0;
  return sign * ratio / (std::pow(2.0 * sigma, r + 1) * kSqrtPi);
}

BinnedPairs::BinnedPairs(const Sample& s, std::size_t bins) : n_(s.size()) {
  if (s.empty()) throw std::invalid_argument("binned pairs of an empty sample");
  if (bins < 2) throw std::invalid_argument("need at least two bins");
  double lo = s.min();
  double hi = s.max();
  if (!(hi > lo)) hi = lo + 1.0;
  const EvaluationGrid grid = linear_bin(s, EvaluationGrid::uniform(lo, hi, bins));
  delta_ = grid.step();
  const auto& c = grid.bin_weights;
  lag_counts_.assign(bins, 0.0);
  for (std::size_t k = 0; k < bins; ++k) {
    if (c[k] == 0.0) continue;
    for (std::size_t d = 0; k + d < bins; ++d) lag_counts_[d] += c[k] * c[k + d];
  }
}

double BinnedPairs::psi(int r, double g) const {
  check_psi_order(r, 12);
  if (!(g > 0)) throw std::invalid_argument("psi bandwidth g must be positive");
  const double total =
      pair_sum([&](double x) { return gaussian_derivative(r, x / g); }, kPairCutoff * g);
  const double n = static_cast<double>(n_);
  return total / (n * n * std::pow(g, r + 1));
}

double psi_kernel_estimate(const Sample& s, int r, double g, bool binned, std::size_t bins) {
  check_psi_order(r, 10);
  if (!(g > 0)) throw std::invalid_argument("psi bandwidth g must be positive");
  if (s.empty()) throw std::invalid_argument("psi estimate of an empty sample");
  if (binned) return BinnedPairs(s, bins).psi(r, g);
  const auto xs = s.values();
  const double n = static_cast<double>(xs.size());
  double off_diagonal = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    for (std::size_t j = i + 1; j < xs.size(); ++j) {
      const double u = (xs[j] - xs[i]) / g;
      if (u > kPairCutoff) break;
      off_diagonal += gaussian_derivative(r, u);
    }
  }
  const double total = n * gaussian_derivative(r, 0.0) + 2.0 * off_diagonal;
  return total / (n * n * std::pow(g, r + 1));
}

double optimal_functional_bandwidth(int r, double psi_next, double n,
                                    ConstantConvention convention) {
  check_psi_order(r, 10);
  if (!(n > 0)) throw std::invalid_argument("sample size must be positive");
  double kernel_at_zero = kernel_constants().at_zero(r);
  if (convention == ConstantConvention::paper_literal) kernel_at_zero /= kInvSqrt2Pi;
  const double radicand = -2.0 * kernel_at_zero / (n * psi_next * kernel_constants().second_moment);
  if (!(radicand > 0) || !std::isfinite(radicand))
    throw std::domain_error("functional bandwidth for psi_" + std::to_string(r) +
                            ": psi_" + std::to_string(r + 2) + " has the wrong sign");
  return std::pow(radicand, 1.0 / (r + 3));
}

double plugin_derivative_bandwidth(int r, double psi_estimate, double n) {
  if (!(n > 0)) throw std::invalid_argument("sample size must be positive");
  double radicand = 0.0;
  int exponent = 0;
  switch (r) {
    case 0: radicand = 1.0 / (2.0 * kSqrtPi * psi_estimate * n); exponent = 5; break;
    case 1: radicand = -3.0 / (4.0 * kSqrtPi * psi_estimate * n); exponent = 7; break;
    case 2: radicand = 15.0 / (8.0 * kSqrtPi * psi_estimate * n); exponent = 9; break;
    default: throw std::invalid_argument("derivative order must be 0, 1 or 2");
  }
  if (!(radicand > 0) || !std::isfinite(radicand)) throw PsiSignError(2 * r + 4, psi_estimate);
  return std::pow(radicand, 1.0 / exponent);
}

void to_json(nlohmann::json& j, const SelectorReport& r) {
  auto psi_map = [](const std::map<int, double>& m) {
    nlohmann::json out = nlohmann::json::object();
    for (const auto& [k, v] : m) out[std::to_string(k)] = v;
    return out;
  };
  auto stage = [](const std::vector<PsiEstimate>& v) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& p : v)
      out.push_back({{"r", p.r}, {"g", p.g}, {"psi", p.value}, {"fallback", p.fallback}});
    return out;
  };
  j = {{"bandwidth", r.bandwidth},
       {"tau", r.tau},
       {"n", r.n},
       {"sigma_hat", r.sigma_hat},
       {"psi_normal_scale", psi_map(r.psi_normal_scale)},
       {"first_stage", stage(r.first_stage)},
       {"second_stage", stage(r.second_stage)},
       {"psi", psi_map(r.psi)},
       {"pilot_bandwidths", {{"h0", r.h0}, {"h1", r.h1}, {"h2", r.h2}}},
       {"crossings", r.crossings},
       {"coefficients", r.coefficients},
       {"minimum", r.minimum},
       {"c_opt_hat", r.c_opt_hat},
       {"paper_literal_constants", r.paper_literal_constants},
       {"warnings", r.warnings}};
}

SelectorReport hdr_bandwidth(const Sample& s, double tau, const SelectorConfig& config) {
  // Step 1
  if (!(tau > 0 && tau < 1)) throw std::invalid_argument("tau must lie in (0, 1)");
  if (s.size() < 50) throw std::invalid_argument("HDR bandwidth selection needs n >= 50");
  SelectorReport rep;
  rep.tau = tau;
  rep.n = s.size();
  rep.paper_literal_constants = config.constants == ConstantConvention::paper_literal;
  const double n = static_cast<double>(s.size());

  // Step 2
  rep.sigma_hat = robust_scale(s);

  // Step 3
  for (int r : {8, 10, 12}) rep.psi_normal_scale[r] = psi_normal_scale(r, rep.sigma_hat);

  std::optional<BinnedPairs> pairs;
  if (config.binned) pairs.emplace(s, config.psi_bins);
  auto estimate = [&](int r, double g) {
    return pairs ? pairs->psi(r, g) : psi_kernel_estimate(s, r, g, false);
  };
  // psi_r has sign (-1)^(r/2); a violation is replaced by the normal-scale
  // value so every downstream radicand stays positive.
  auto checked = [&](int step, int r, double g) {
    PsiEstimate p{r, g, estimate(r, g), false};
    const bool positive_expected = (r / 2) % 2 == 0;
    if ((p.value > 0) != positive_expected || !std::isfinite(p.value)) {
      rep.warnings.push_back("step " + std::to_string(step) + ": psi_" + std::to_string(r) +
                             " estimate " + std::to_string(p.value) +
                             " has the wrong sign; using the normal-scale value");
      p.value = psi_normal_scale(r, rep.sigma_hat);
      p.fallback = true;
    }
    return p;
  };
  auto functional_g = [&](int step, int r, double psi_next) {
    try {
      return optimal_functional_bandwidth(r, psi_next, n, config.constants);
    } catch (const std::domain_error& e) {
      throw SelectorError(step, e.what());
    }
  };

  // Step 4: psi_6, psi_8, psi_10, each at the g driven by psi_{r+2}^NS.
  for (int r : {6, 8, 10})
    rep.first_stage.push_back(checked(4, r, functional_g(4, r, rep.psi_normal_scale[r + 2])));
  auto first = [&](int r) { return rep.first_stage[(r - 6) / 2].value; };

  // Step 5: psi_4, psi_6, psi_8, each at the g driven by the step-4 psi_{r+2}.
  for (int r : {4, 6, 8})
    rep.second_stage.push_back(checked(5, r, functional_g(5, r, first(r + 2))));
  auto second = [&](int r) { return rep.second_stage[(r - 4) / 2].value; };

  rep.psi = {{4, second(4)}, {6, second(6)}, {8, second(8)}, {10, first(10)},
             {12, rep.psi_normal_scale[12]}};

  // Step 6
  try {
    rep.h0 = plugin_derivative_bandwidth(0, second(4), n);
    rep.h1 = plugin_derivative_bandwidth(1, second(6), n);
    rep.h2 = plugin_derivative_bandwidth(2, second(8), n);
  } catch (const PsiSignError& e) {
    throw SelectorError(6, e.what());
  }

  // Steps 7-8
  EvaluationGrid grid = default_grid(s, rep.h0, config.grid_points);
  if (config.binned) grid = linear_bin(s, std::move(grid));
  try {
    rep.crossings = find_crossings(s, rep.h0, rep.h1, rep.h2, tau, grid);
  } catch (const CrossingError& e) {
    throw SelectorError(8, e.what());
  } catch (const std::domain_error& e) {
    throw SelectorError(8, e.what());
  }

  // Step 9
  try {
    rep.coefficients = risk_coefficients(rep.crossings.level, rep.crossings.crossings,
                                          kernel_constants(), VarianceClamp::on);
  } catch (const std::exception& e) {
    throw SelectorError(9, e.what());
  }
  if (rep.coefficients.clamped > 0)
    rep.warnings.push_back("step 9: variance term clamped at " +
                           std::to_string(rep.coefficients.clamped) + " crossing(s)");

  // Step 10
  try {
    rep.minimum = minimize_ar(n, rep.coefficients, rep.h0 * std::pow(n, 0.2));
  } catch (const std::domain_error& e) {
    throw SelectorError(10, e.what());
  }
  if (rep.minimum.multimodal)
    rep.warnings.push_back("step 10: estimated asymptotic risk has " +
                           std::to_string(rep.minimum.local_minima) + " local minima");
  rep.c_opt_hat = rep.minimum.c_opt;
  rep.bandwidth = rep.c_opt_hat * std::pow(n, -0.2);
  return rep;
}

double lscv_criterion(const Sample& s, double h) {
  if (s.size() < 2) throw std::invalid_argument("LSCV needs at least 2 observations");
  if (!(h > 0)) throw std::invalid_argument("bandwidth must be positive");
  const auto xs = s.values();
  const double n = static_cast<double>(xs.size());
  // exp(-d^2 / 4h^2) gives phi_{sqrt2 h}; its square gives phi_h.
  double sum_sqrt2 = 0.0;
  double sum_h = 0.0;
  const double cutoff = kPairCutoff * std::numbers::sqrt2 * h;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    for (std::size_t j = i + 1; j < xs.size(); ++j) {
      const double d = xs[j] - xs[i];
      if (d > cutoff) break;
      const double e = std::exp(-d * d / (4.0 * h * h));
      sum_sqrt2 += e;
      sum_h += e * e;
    }
  }
  const double c_sqrt2 = kInvSqrt2Pi / (std::numbers::sqrt2 * h);
  const double c_h = kInvSqrt2Pi / h;
  const double integral_sq = (n * c_sqrt2 + 2.0 * c_sqrt2 * sum_sqrt2) / (n * n);
  const double leave_one_out = 2.0 * 2.0 * c_h * sum_h / (n * (n - 1.0));
  return integral_sq - leave_one_out;
}

LscvResult lscv_bandwidth(const Sample& s, const LscvConfig& config) {
  if (s.size() < 10) throw std::invalid_argument("LSCV bandwidth needs n >= 10");
  const double n = static_cast<double>(s.size());
  const double sd = sample_sd(s.values());
  if (!(sd > 0)) throw std::invalid_argument("degenerate sample: zero standard deviation");
  const double h_os = 1.144 * sd * std::pow(n, -0.2);

  std::optional<BinnedPairs> pairs;
  if (config.binned.value_or(s.size() > 5000)) pairs.emplace(s, config.bins);
  auto criterion = [&](double h) {
    if (!pairs) return lscv_criterion(s, h);
    const double all_sqrt2 = pairs->pair_sum(
        [&](double d) { return gaussian_scaled(d, std::numbers::sqrt2 * h); },
        kPairCutoff * std::numbers::sqrt2 * h);
    const double all_h =
        pairs->pair_sum([&](double d) { return gaussian_scaled(d, h); }, kPairCutoff * h);
    return all_sqrt2 / (n * n) - 2.0 * (all_h - n * gaussian_scaled(0.0, h)) / (n * (n - 1.0));
  };

  const auto hs = log_grid(h_os / 20.0, h_os, std::max<std::size_t>(config.grid_points, 3));
  std::vector<double> values(hs.size());
  for (std::size_t i = 0; i < hs.size(); ++i) values[i] = criterion(hs[i]);
  const auto best =
      static_cast<std::size_t>(std::min_element(values.begin(), values.end()) - values.begin());
  LscvResult out;
  if (best == 0 || best + 1 == hs.size()) {
    out.bandwidth = hs[best];
    out.criterion = values[best];
    out.boundary = true;
    return out;
  }
  const double log_h = bisect_minimize([&](double t) { return criterion(std::exp(t)); },
                                       std::log(hs[best - 1]), std::log(hs[best + 1]), 1e-4);
  out.bandwidth = std::exp(log_h);
  out.criterion = criterion(out.bandwidth);
  return out;
}

}  // namespace hdrband
