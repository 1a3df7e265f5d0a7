#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "hdrband/models.hpp"
#include "hdrband/sample.hpp"
#include "hdrband/selector.hpp"

namespace hdrband {

//! Wilcoxon signed-rank test of a set of paired differences against zero,
//! normal approximation with continuity and tie corrections. Zero
//! differences are dropped.
struct WilcoxonResult {
  std::size_t n_used = 0;
  //! Sum of ranks of the positive differences.
  double w_plus = 0.0;
  double z = 0.0;
  //! Two-sided.
  double p_value = 1.0;
};

WilcoxonResult wilcoxon_signed_rank(std::span<const double> differences);

double median(std::vector<double> values);

//! Bandwidth for a sample and tau. Selectors that ignore tau are fine.
using BandwidthSelector = std::function<double(const Sample&, double tau)>;

struct SimulationRecord {
  std::size_t rep = 0;
  double tau = 0.0;
  double h_hdr = 0.0;
  double h_lscv = 0.0;
  double err_hdr = 0.0;
  double err_lscv = 0.0;
  bool ok = true;
  std::string failure;
};

struct TauSummary {
  double tau = 0.0;
  std::size_t used = 0;
  std::size_t failed = 0;
  //! Median of log10(err_hdr / err_lscv); negative favours the HDR selector.
  double median_log10_ratio = 0.0;
  WilcoxonResult wilcoxon;
  //! Fewer than 20 usable replications; the normal approximation is poor.
  bool low_power = false;
};

struct SimulationResult {
  std::vector<SimulationRecord> records;
  std::vector<TauSummary> summaries;
};

struct SimulationConfig {
  //! Defaults: hdr_bandwidth(exact constants) and lscv_bandwidth.
  BandwidthSelector hdr_selector;
  BandwidthSelector lscv_selector;
  //! When false the baseline runs once per replication (with the first tau).
  bool lscv_uses_tau = false;
  SelectorConfig selector;
  std::size_t grid_points = 2048;
  unsigned threads = 0;
};

//! For each replication draws one sample of size n from m, applies both
//! selectors for every tau and records mu_f(R_hat ^ R_tau) for each. A
//! replication whose selector throws is recorded with ok = false and left
//! out of the summary. Replication i uses derive_seed(seed, i).
SimulationResult compare_selectors(const NormalMixture& m, std::size_t n,
                                   std::span<const double> taus, std::size_t reps,
                                   std::uint64_t seed, const SimulationConfig& config = {});

//! Header `rep,tau,err_hdr,err_lscv`.
void write_records_csv(std::ostream& os, std::span<const SimulationRecord> records);

void to_json(nlohmann::json& j, const WilcoxonResult& w);
void to_json(nlohmann::json& j, const TauSummary& s);

}  // namespace hdrband
