#include "hdrband/cli.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hdrband/hdr.hpp"
#include "hdrband/minimize.hpp"
#include "hdrband/models.hpp"
#include "hdrband/risk.hpp"
#include "hdrband/selector.hpp"
#include "hdrband/simulation.hpp"

namespace hdrband::cli {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return {};
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

bool parse_double(const std::string& text, double& value) {
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (first != last && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  return ec == std::errc() && ptr == last;
}

Sample load_sample(const std::string& path) {
  if (path == "-") return read_sample(std::cin, "stdin");
  std::ifstream in(path);
  if (!in) throw DataError("cannot open input file '" + path + "'");
  return read_sample(in, path);
}

void check_tau(double tau) {
  if (!(tau > 0 && tau < 1)) throw DataError("tau must lie strictly between 0 and 1");
}

NormalMixture load_model(const std::string& spec) {
  try {
    if (!spec.empty() && spec.front() != '{' && std::filesystem::is_regular_file(spec)) {
      std::ifstream in(spec);
      std::stringstream buf;
      buf << in.rdbuf();
      return parse_mixture(buf.str());
    }
    return parse_mixture(spec);
  } catch (const std::invalid_argument& e) {
    throw DataError(e.what());
  }
}

// Writes to the file when a path is given, else to `out`.
template <class Writer>
void emit(const std::string& path, std::ostream& out, Writer&& write) {
  if (path.empty()) {
    write(out);
    return;
  }
  std::ofstream file(path);
  if (!file) throw DataError("cannot open output file '" + path + "'");
  write(file);
}

struct Options {
  bool paper_literal = false;

  std::string input;
  std::string output;
  double tau = 0.5;
  bool exact = false;

  double bandwidth = 0.0;
  std::string format = "json";
  std::size_t grid_points = 2048;

  std::string model = "normal";
  std::size_t n = 1000;
  std::size_t M = 100;
  double h_min = 0.05;
  double h_max = 1.0;
  std::size_t h_count = 20;
  std::uint64_t seed = 0;

  std::vector<double> taus{0.2, 0.5, 0.8};
  std::size_t reps = 100;
  std::string summary;
};

SelectorConfig selector_config(const Options& o) {
  SelectorConfig cfg;
  cfg.constants = o.paper_literal ? ConstantConvention::paper_literal : ConstantConvention::exact;
  cfg.binned = !o.exact;
  return cfg;
}

int cmd_select(const Options& o, std::ostream& out) {
  check_tau(o.tau);
  const Sample s = load_sample(o.input);
  const SelectorReport report = hdr_bandwidth(s, o.tau, selector_config(o));
  emit(o.output, out, [&](std::ostream& os) { os << nlohmann::json(report).dump(2) << '\n'; });
  return kOk;
}

int cmd_hdr(const Options& o, std::ostream& out, std::ostream& err) {
  check_tau(o.tau);
  if (o.format != "json" && o.format != "csv") throw DataError("format must be json or csv");
  const Sample s = load_sample(o.input);
  const double h = o.bandwidth > 0 ? o.bandwidth : hdr_bandwidth(s, o.tau, selector_config(o)).bandwidth;
  const RegionEstimate est = estimate_region(s, h, o.tau, o.grid_points);
  emit(o.output, out, [&](std::ostream& os) {
    if (o.format == "csv") {
      write_csv(os, est.region);
    } else {
      const nlohmann::json j = {{"tau", o.tau}, {"bandwidth", h}, {"level", est.level},
                                {"intervals", est.region}};
      os << j.dump(2) << '\n';
    }
  });
  if (o.format == "csv") err << "level=" << est.level << " bandwidth=" << h << '\n';
  return kOk;
}

int cmd_risk_curve(const Options& o, std::ostream& out, std::ostream& err) {
  check_tau(o.tau);
  if (o.M == 0 || o.n < 2 || o.h_count < 2) throw DataError("M, n and h-count must be positive");
  if (!(o.h_min > 0 && o.h_max > o.h_min)) throw DataError("need 0 < h-min < h-max");
  const NormalMixture m = load_model(o.model);
  const auto hs = log_grid(o.h_min, o.h_max, o.h_count);
  const auto curve = monte_carlo_risk(m, o.n, o.tau, hs, o.M, o.seed);
  emit(o.output, out, [&](std::ostream& os) { write_risk_curve_csv(os, curve); });

  std::size_t best_mc = 0;
  std::size_t best_asym = 0;
  for (std::size_t k = 1; k < curve.size(); ++k) {
    if (curve[k].monte_carlo->mean < curve[best_mc].monte_carlo->mean) best_mc = k;
    if (curve[k].asymptotic < curve[best_asym].asymptotic) best_asym = k;
  }
  const HdrOracle oracle = hdr_oracle(m, o.tau);
  const double n = static_cast<double>(o.n);
  const ArMinimum opt = minimize_ar(n, risk_coefficients(oracle.level, oracle.crossings));
  err << "argmin_mc_h=" << curve[best_mc].h << " argmin_asym_h=" << curve[best_asym].h
      << " asym_h_opt=" << opt.c_opt * std::pow(n, -0.2) << '\n';
  return kOk;
}

int cmd_simulate(const Options& o, std::ostream& out, std::ostream& err) {
  if (o.reps < 2) throw DataError("reps must be at least 2");
  if (o.n < 50) throw DataError("n must be at least 50");
  if (o.taus.empty()) throw DataError("no tau given");
  for (double t : o.taus) check_tau(t);
  const NormalMixture m = load_model(o.model);
  SimulationConfig cfg;
  cfg.selector = selector_config(o);
  const SimulationResult result = compare_selectors(m, o.n, o.taus, o.reps, o.seed, cfg);
  emit(o.output, out, [&](std::ostream& os) { write_records_csv(os, result.records); });

  nlohmann::json summary = nlohmann::json::array();
  for (const auto& s : result.summaries) {
    summary.push_back(s);
    err << "tau=" << s.tau << " used=" << s.used << " failed=" << s.failed
        << " median_log10_ratio=" << s.median_log10_ratio << " wilcoxon_z=" << s.wilcoxon.z
        << " p=" << s.wilcoxon.p_value << (s.low_power ? " (low power)" : "") << '\n';
  }
  if (!o.summary.empty()) {
    std::ofstream file(o.summary);
    if (!file) throw DataError("cannot open summary file '" + o.summary + "'");
    file << summary.dump(2) << '\n';
  }
  return kOk;
}

int cmd_oracle(const Options& o, std::ostream& out) {
  check_tau(o.tau);
  const NormalMixture m = load_model(o.model);
  const HdrOracle oracle = hdr_oracle(m, o.tau);
  const RiskCoefficients rc = risk_coefficients(oracle.level, oracle.crossings);
  const double n = static_cast<double>(o.n);
  const ArMinimum opt = minimize_ar(n, rc);
  const nlohmann::json j = {{"model", m},
                            {"oracle", oracle},
                            {"coefficients", rc},
                            {"n", o.n},
                            {"minimum", opt},
                            {"h_opt", opt.c_opt * std::pow(n, -0.2)}};
  emit(o.output, out, [&](std::ostream& os) { os << j.dump(2) << '\n'; });
  return kOk;
}

}  // namespace

Sample read_sample(std::istream& in, const std::string& source) {
  std::vector<double> values;
  std::string line;
  std::size_t line_no = 0;
  bool seen_content = false;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty()) continue;
    double v = 0.0;
    if (parse_double(t, v)) {
      if (!std::isfinite(v))
        throw DataError(source + ": line " + std::to_string(line_no) + ": non-finite value");
      values.push_back(v);
    } else if (!seen_content && t.find(',') == std::string::npos) {
      // header row
    } else {
      throw DataError(source + ": line " + std::to_string(line_no) + ": not a number: '" + t + "'");
    }
    seen_content = true;
  }
  if (values.empty()) throw DataError(source + ": no numeric values");
  return Sample(std::move(values));
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bandwidth selection and kernel estimation of highest density regions", "hdrband"};
  app.require_subcommand(1);
  Options o;
  app.add_flag("--paper-literal-constants", o.paper_literal,
               "Use the integer pilot-bandwidth constants without the 1/sqrt(2 pi) factor");

  auto* select = app.add_subcommand("select", "Plug-in HDR bandwidth for a sample (JSON report)");
  select->add_option("input,-i,--input", o.input, "Sample file, one value per line ('-' = stdin)")->required();
  select->add_option("-t,--tau", o.tau, "HDR parameter: the region holds 1 - tau")->required();
  select->add_flag("--exact", o.exact, "Exact double sums instead of binned approximations");
  select->add_option("-o,--output", o.output, "Output path (default stdout)");

  auto* hdr = app.add_subcommand("hdr", "Estimated HDR of a sample");
  hdr->add_option("input,-i,--input", o.input, "Sample file ('-' = stdin)")->required();
  hdr->add_option("-t,--tau", o.tau, "HDR parameter")->required();
  hdr->add_option("-b,--bandwidth", o.bandwidth, "Bandwidth (default: plug-in HDR selector)");
  hdr->add_option("--format", o.format, "json or csv");
  hdr->add_option("--grid", o.grid_points, "Grid points");
  hdr->add_flag("--exact", o.exact, "Exact sums in the selector");
  hdr->add_option("-o,--output", o.output, "Output path (default stdout)");

  auto* risk = app.add_subcommand("risk-curve", "Monte Carlo and asymptotic risk against h (CSV)");
  risk->add_option("-m,--model", o.model, "Preset name, JSON mixture or JSON file");
  risk->add_option("-n,--n", o.n, "Sample size");
  risk->add_option("-t,--tau", o.tau, "HDR parameter");
  risk->add_option("-M,--M", o.M, "Monte Carlo replications");
  risk->add_option("--h-min", o.h_min, "Smallest bandwidth");
  risk->add_option("--h-max", o.h_max, "Largest bandwidth");
  risk->add_option("--h-count", o.h_count, "Number of log-spaced bandwidths");
  risk->add_option("-s,--seed", o.seed, "Random seed")->required();
  risk->add_option("-o,--output", o.output, "Output path (default stdout)");

  auto* sim = app.add_subcommand("simulate", "HDR selector against LSCV on simulated samples");
  sim->add_option("-m,--model", o.model, "Preset name, JSON mixture or JSON file");
  sim->add_option("-n,--n", o.n, "Sample size");
  sim->add_option("-t,--tau", o.taus, "HDR parameters")->delimiter(',');
  sim->add_option("-r,--reps", o.reps, "Replications");
  sim->add_option("-s,--seed", o.seed, "Random seed")->required();
  sim->add_flag("--exact", o.exact, "Exact sums in the HDR selector");
  sim->add_option("-o,--output", o.output, "Per-replication CSV path (default stdout)");
  sim->add_option("--summary", o.summary, "Write the per-tau summary as JSON");

  auto* oracle = app.add_subcommand("oracle", "Exact HDR and risk coefficients of a model (JSON)");
  oracle->add_option("-m,--model", o.model, "Preset name, JSON mixture or JSON file");
  oracle->add_option("-t,--tau", o.tau, "HDR parameter");
  oracle->add_option("-n,--n", o.n, "Sample size for the optimal bandwidth");
  oracle->add_option("-o,--output", o.output, "Output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsageError;
  }

  try {
    if (select->parsed()) return cmd_select(o, out);
    if (hdr->parsed()) return cmd_hdr(o, out, err);
    if (risk->parsed()) return cmd_risk_curve(o, out, err);
    if (sim->parsed()) return cmd_simulate(o, out, err);
    if (oracle->parsed()) return cmd_oracle(o, out);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kPipelineError;
  }
  return kUsageError;
}

}  // namespace hdrband::cli
