#include "hdrband/models.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "hdrband/normal.hpp"
#include "hdrband/rng.hpp"

namespace hdrband {

NormalMixture::NormalMixture(std::vector<MixtureComponent> components)
    : components_(std::move(components)) {
  if (components_.empty()) throw std::invalid_argument("mixture has no components");
  double total = 0.0;
  for (const auto& c : components_) {
    if (!(c.weight > 0) || !std::isfinite(c.weight))
      throw std::invalid_argument("mixture weights must be positive");
    if (!(c.sd > 0) || !std::isfinite(c.sd))
      throw std::invalid_argument("mixture sds must be positive");
    if (!std::isfinite(c.mean)) throw std::invalid_argument("mixture means must be finite");
    total += c.weight;
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw std::invalid_argument("mixture weights sum to " + std::to_string(total));
}

NormalMixture NormalMixture::standard_normal() { return NormalMixture({{1.0, 0.0, 1.0}}); }

double NormalMixture::eval(int order, double x) const {
  if (order < 0 || order > 2)
    throw std::invalid_argument("mixture derivative order must be 0, 1 or 2");
  double total = 0.0;
  for (const auto& c : components_) {
    const double z = (x - c.mean) / c.sd;
    const double base = c.weight * norm_pdf(z) / c.sd;
    switch (order) {
      case 0: total += base; break;
      case 1: total += -z * base / c.sd; break;
      default: total += (z * z - 1.0) * base / (c.sd * c.sd); break;
    }
  }
  return total;
}

double NormalMixture::cdf(double x) const {
  if (x == std::numeric_limits<double>::infinity()) return 1.0;
  if (x == -std::numeric_limits<double>::infinity()) return 0.0;
  double total = 0.0;
  for (const auto& c : components_) total += c.weight * norm_cdf((x - c.mean) / c.sd);
  return std::min(total, 1.0);
}

Sample NormalMixture::sample(std::size_t n, std::uint64_t seed) const {
  if (n == 0) throw std::invalid_argument("sample size must be positive");
  const CounterRng pick(derive_seed(seed, 0));
  const CounterRng noise(derive_seed(seed, 1));
  std::vector<double> cumulative;
  double acc = 0.0;
  for (const auto& c : components_) cumulative.push_back(acc += c.weight);
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double u = pick.uniform(i) * acc;
    const auto k = std::min<std::size_t>(
        std::upper_bound(cumulative.begin(), cumulative.end(), u) - cumulative.begin(),
        components_.size() - 1);
    out[i] = components_[k].mean + components_[k].sd * noise.normal(i);
  }
  return Sample(std::move(out));
}

Interval NormalMixture::effective_support() const {
  Interval s{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (const auto& c : components_) {
    s.lo = std::min(s.lo, c.mean - 12.0 * c.sd);
    s.hi = std::max(s.hi, c.mean + 12.0 * c.sd);
  }
  return s;
}

// The fifteen-density benchmark set, first ten members.
NormalMixture mixture_preset(std::string_view name) {
  using C = MixtureComponent;
  if (name == "normal" || name == "mw1") return NormalMixture::standard_normal();
  if (name == "mw2")
    return NormalMixture({C{0.2, 0.0, 1.0}, C{0.2, 0.5, 2.0 / 3.0}, C{0.6, 13.0 / 12.0, 5.0 / 9.0}});
  if (name == "mw3") {
    std::vector<C> cs;
    for (int l = 0; l < 8; ++l) {
      const double s = std::pow(2.0 / 3.0, l);
      cs.push_back({0.125, 3.0 * (s - 1.0), s});
    }
    return NormalMixture(std::move(cs));
  }
  if (name == "mw4") return NormalMixture({C{2.0 / 3.0, 0.0, 1.0}, C{1.0 / 3.0, 0.0, 0.1}});
  if (name == "mw5") return NormalMixture({C{0.1, 0.0, 1.0}, C{0.9, 0.0, 0.1}});
  if (name == "mw6") return NormalMixture({C{0.5, -1.0, 2.0 / 3.0}, C{0.5, 1.0, 2.0 / 3.0}});
  if (name == "mw7") return NormalMixture({C{0.5, -1.5, 0.5}, C{0.5, 1.5, 0.5}});
  if (name == "mw8") return NormalMixture({C{0.75, 0.0, 1.0}, C{0.25, 1.5, 1.0 / 3.0}});
  if (name == "mw9")
    return NormalMixture({C{0.45, -1.2, 0.6}, C{0.45, 1.2, 0.6}, C{0.1, 0.0, 0.25}});
  if (name == "mw10") {
    std::vector<C> cs{{0.5, 0.0, 1.0}};
    for (int l = 0; l <= 4; ++l) cs.push_back({0.1, l / 2.0 - 1.0, 0.1});
    return NormalMixture(std::move(cs));
  }
  std::string msg = "unknown mixture preset '" + std::string(name) + "'; presets:";
  for (const auto& p : mixture_preset_names()) msg += " " + p;
  throw std::invalid_argument(msg);
}

std::vector<std::string> mixture_preset_names() {
  return {"normal", "mw1", "mw2", "mw3", "mw4", "mw5", "mw6", "mw7", "mw8", "mw9", "mw10"};
}

NormalMixture parse_mixture(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string_view::npos && text[first] == '{') {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      throw std::invalid_argument(std::string("malformed mixture JSON: ") + e.what());
    }
    try {
      return mixture_from_json(j);
    } catch (const nlohmann::json::exception& e) {
      throw std::invalid_argument(std::string("malformed mixture JSON: ") + e.what());
    }
  }
  return mixture_preset(text);
}

void to_json(nlohmann::json& j, const NormalMixture& m) {
  j = nlohmann::json::object();
  auto& arr = j["components"] = nlohmann::json::array();
  for (const auto& c : m.components()) arr.push_back({{"w", c.weight}, {"mu", c.mean}, {"sd", c.sd}});
}

NormalMixture mixture_from_json(const nlohmann::json& j) {
  std::vector<MixtureComponent> cs;
  for (const auto& c : j.at("components"))
    cs.push_back({c.at("w").get<double>(), c.at("mu").get<double>(), c.at("sd").get<double>()});
  return NormalMixture(std::move(cs));
}

void to_json(nlohmann::json& j, const Crossing& c) {
  j = {{"x", c.x}, {"slope", c.slope}, {"curvature", c.curvature}};
}

void to_json(nlohmann::json& j, const HdrOracle& o) {
  j = {{"tau", o.tau}, {"level", o.level}, {"region", o.region}, {"crossings", o.crossings}};
}

namespace {

// Root of g on [a, b] given a sign change; Newton steps that leave the
// bracket fall back to bisection.
template <class G, class DG>
double safeguarded_newton(G&& g, DG&& dg, double a, double b) {
  double ga = g(a);
  double x = 0.5 * (a + b);
  for (int it = 0; it < 200; ++it) {
    const double gx = g(x);
    if (gx == 0.0) return x;
    if ((gx < 0) == (ga < 0)) {
      a = x;
      ga = gx;
    } else {
      b = x;
    }
    const double d = dg(x);
    double next = d != 0.0 ? x - gx / d : a;
    if (!(next > a && next < b)) next = 0.5 * (a + b);
    if (std::abs(next - x) <= 1e-15 * std::max(1.0, std::abs(x)) || b - a <= 1e-15 * std::max(1.0, std::abs(x)))
      return next;
    x = next;
  }
  return x;
}

// Stationary points of f, found by scanning f' on a grid finer than the
// narrowest component and refining each sign change.
std::vector<double> stationary_points(const NormalMixture& m, Interval support) {
  double min_sd = std::numeric_limits<double>::infinity();
  for (const auto& c : m.components()) min_sd = std::min(min_sd, c.sd);
  const double step = min_sd / 40.0;
  const auto steps = static_cast<std::size_t>(std::ceil((support.hi - support.lo) / step));
  auto d1 = [&](double x) { return m.eval(1, x); };
  auto d2 = [&](double x) { return m.eval(2, x); };
  std::vector<double> out;
  double xa = support.lo;
  double da = d1(xa);
  for (std::size_t k = 1; k <= steps; ++k) {
    const double xb = support.lo + (support.hi - support.lo) * static_cast<double>(k) / steps;
    const double db = d1(xb);
    if (db == 0.0)
      out.push_back(xb);
    else if (da != 0.0 && (da < 0) != (db < 0))
      out.push_back(safeguarded_newton(d1, d2, xa, xb));
    xa = xb;
    da = db;
  }
  return out;
}

}  // namespace

HdrOracle hdr_oracle(const NormalMixture& m, double tau) {
  if (!(tau > 0 && tau < 1)) throw std::invalid_argument("tau must lie in (0, 1)");
  const Interval support = m.effective_support();
  std::vector<double> breaks{support.lo};
  const auto stationary = stationary_points(m, support);
  breaks.insert(breaks.end(), stationary.begin(), stationary.end());
  breaks.push_back(support.hi);

  double fmax = 0.0;
  for (double s : stationary) fmax = std::max(fmax, m.pdf(s));

  auto f = [&](double x) { return m.pdf(x); };
  auto df = [&](double x) { return m.eval(1, x); };
  // f is monotone between consecutive breaks, so each piece holds at most
  // one crossing of the level.
  auto crossings_at = [&](double level) {
    std::vector<double> xs;
    for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
      const double ga = f(breaks[k]) - level;
      const double gb = f(breaks[k + 1]) - level;
      if ((ga < 0) != (gb < 0) && ga != 0.0 && gb != 0.0)
        xs.push_back(safeguarded_newton([&](double x) { return f(x) - level; }, df, breaks[k],
                                        breaks[k + 1]));
    }
    return xs;
  };
  auto mass_of = [&](const std::vector<double>& xs) {
    double mass = 0.0;
    for (std::size_t j = 0; j + 1 < xs.size(); j += 2) mass += m.cdf(xs[j + 1]) - m.cdf(xs[j]);
    return mass;
  };

  const double target = 1.0 - tau;
  double lo = 0.0;
  double hi = fmax;
  double level = 0.5 * (lo + hi);
  std::vector<double> xs;
  for (int it = 0; it < 200; ++it) {
    level = 0.5 * (lo + hi);
    xs = crossings_at(level);
    const double mass = mass_of(xs);
    if (std::abs(mass - target) < 1e-12) break;
    if (mass > target)
      lo = level;
    else
      hi = level;
    if (hi - lo <= 1e-16 * fmax) break;
  }

  if (xs.empty() || xs.size() % 2 != 0)
    throw std::domain_error("hdr_oracle: level crossings do not pair up");
  HdrOracle out{tau, level, {}, {}};
  std::vector<Interval> pieces;
  for (std::size_t j = 0; j < xs.size(); ++j) {
    const Crossing c{xs[j], m.eval(1, xs[j]), m.eval(2, xs[j])};
    if (std::abs(c.slope) < 1e-6)
      throw std::domain_error("hdr_oracle: level for tau = " + std::to_string(tau) +
                              " is tangent to the density (degenerate tau)");
    if ((j % 2 == 0) != (c.slope > 0))
      throw std::domain_error("hdr_oracle: crossing slopes do not alternate");
    out.crossings.push_back(c);
    if (j % 2 == 1) pieces.push_back({xs[j - 1], xs[j]});
  }
  out.region = IntervalUnion(std::move(pieces));
  return out;
}

}  // namespace hdrband
