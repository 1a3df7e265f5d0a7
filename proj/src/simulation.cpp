#include "hdrband/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <ostream>
#include <stdexcept>

#include "hdrband/hdr.hpp"
#include "hdrband/normal.hpp"
#include "hdrband/parallel.hpp"
#include "hdrband/rng.hpp"

namespace hdrband {

WilcoxonResult wilcoxon_signed_rank(std::span<const double> differences) {
  std::vector<double> d;
  for (double x : differences)
    if (x != 0.0 && !std::isnan(x)) d.push_back(x);
  WilcoxonResult out;
  out.n_used = d.size();
  if (d.empty()) return out;

  std::vector<std::size_t> order(d.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return std::abs(d[a]) < std::abs(d[b]); });
  std::vector<double> rank(d.size());
  double tie_term = 0.0;
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && std::abs(d[order[j + 1]]) == std::abs(d[order[i]])) ++j;
    const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) rank[order[k]] = avg;
    const double t = static_cast<double>(j - i + 1);
    tie_term += t * t * t - t;
    i = j + 1;
  }
  for (std::size_t i = 0; i < d.size(); ++i)
    if (d[i] > 0) out.w_plus += rank[i];

  const double m = static_cast<double>(d.size());
  const double mean = m * (m + 1.0) / 4.0;
  const double var = m * (m + 1.0) * (2.0 * m + 1.0) / 24.0 - tie_term / 48.0;
  if (var <= 0) return out;
  const double diff = out.w_plus - mean;
  const double corrected = diff > 0 ? std::max(0.0, diff - 0.5) : std::min(0.0, diff + 0.5);
  out.z = corrected / std::sqrt(var);
  out.p_value = std::min(1.0, 2.0 * norm_cdf(-std::abs(out.z)));
  return out;
}

double median(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("median of an empty set");
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + mid, values.end());
  const double upper = values[mid];
  if (values.size() % 2 == 1) return upper;
  const double lower = *std::max_element(values.begin(), values.begin() + mid);
  return 0.5 * (lower + upper);
}

SimulationResult compare_selectors(const NormalMixture& m, std::size_t n,
                                   std::span<const double> taus, std::size_t reps,
                                   std::uint64_t seed, const SimulationConfig& config) {
  if (reps < 2) throw std::invalid_argument("simulation needs at least 2 replications");
  if (taus.empty()) throw std::invalid_argument("no tau values given");
  std::vector<HdrOracle> oracles;
  for (double tau : taus) oracles.push_back(hdr_oracle(m, tau));

  BandwidthSelector hdr_sel = config.hdr_selector;
  if (!hdr_sel) {
    hdr_sel = [cfg = config.selector](const Sample& s, double tau) {
      return hdr_bandwidth(s, tau, cfg).bandwidth;
    };
  }
  BandwidthSelector lscv_sel = config.lscv_selector;
  if (!lscv_sel) lscv_sel = [](const Sample& s, double) { return lscv_bandwidth(s).bandwidth; };

  const std::size_t per_rep = taus.size();
  std::vector<SimulationRecord> records(reps * per_rep);
  parallel_for(reps, config.threads, [&](std::size_t rep) {
    const Sample s = m.sample(n, derive_seed(seed, rep));
    std::optional<double> shared_lscv;
    std::string shared_failure;
    if (!config.lscv_uses_tau) {
      try {
        shared_lscv = lscv_sel(s, taus[0]);
      } catch (const std::exception& e) {
        shared_failure = e.what();
      }
    }
    for (std::size_t t = 0; t < per_rep; ++t) {
      auto& rec = records[rep * per_rep + t];
      rec.rep = rep;
      rec.tau = taus[t];
      try {
        rec.h_hdr = hdr_sel(s, taus[t]);
        if (config.lscv_uses_tau)
          rec.h_lscv = lscv_sel(s, taus[t]);
        else if (shared_lscv)
          rec.h_lscv = *shared_lscv;
        else
          throw std::runtime_error(shared_failure);
        const auto a = estimate_region(s, rec.h_hdr, taus[t], config.grid_points);
        const auto b = estimate_region(s, rec.h_lscv, taus[t], config.grid_points);
        rec.err_hdr = symmetric_difference_mass(a.region, oracles[t].region, m);
        rec.err_lscv = symmetric_difference_mass(b.region, oracles[t].region, m);
      } catch (const std::exception& e) {
        rec.ok = false;
        rec.failure = e.what();
      }
    }
  });

  SimulationResult out;
  out.records = std::move(records);
  for (std::size_t t = 0; t < per_rep; ++t) {
    TauSummary sum;
    sum.tau = taus[t];
    std::vector<double> ratios;
    for (const auto& rec : out.records) {
      if (rec.tau != taus[t]) continue;
      if (!rec.ok) {
        ++sum.failed;
        continue;
      }
      ratios.push_back(rec.err_hdr == rec.err_lscv ? 0.0
                                                   : std::log10(rec.err_hdr / rec.err_lscv));
    }
    sum.used = ratios.size();
    sum.low_power = sum.used < 20;
    if (!ratios.empty()) {
      sum.median_log10_ratio = median(ratios);
      sum.wilcoxon = wilcoxon_signed_rank(ratios);
    }
    out.summaries.push_back(sum);
  }
  return out;
}

void write_records_csv(std::ostream& os, std::span<const SimulationRecord> records) {
  os << "rep,tau,err_hdr,err_lscv\n";
  const auto old = os.precision(17);
  for (const auto& r : records) {
    os << r.rep << ',' << r.tau << ',';
    if (r.ok) os << r.err_hdr << ',' << r.err_lscv;
    else os << ',';
    os << '\n';
  }
  os.precision(old);
}

void to_json(nlohmann::json& j, const WilcoxonResult& w) {
  j = {{"n_used", w.n_used}, {"w_plus", w.w_plus}, {"z", w.z}, {"p_value", w.p_value}};
}

void to_json(nlohmann::json& j, const TauSummary& s) {
  j = {{"tau", s.tau},
       {"used", s.used},
       {"failed", s.failed},
       {"median_log10_ratio", s.median_log10_ratio},
       {"wilcoxon", s.wilcoxon},
       {"low_power", s.low_power}};
}

}  // namespace hdrband
