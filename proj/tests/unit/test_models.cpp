#include <doctest.h>

#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <stdexcept>

#include "generators.hpp"
#include "hdrband/models.hpp"
#include "hdrband/rng.hpp"
#include "oracles.hpp"

using namespace hdrband;

namespace {

std::vector<oracle::Comp> comps(const NormalMixture& m) {
  std::vector<oracle::Comp> out;
  for (const auto& c : m.components()) out.push_back({c.weight, c.mean, c.sd});
  return out;
}

}  // namespace

TEST_CASE("mixture density examples") {
  const auto n = NormalMixture::standard_normal();
  CHECK(n.pdf(0.0) == doctest::Approx(0.3989423).epsilon(1e-7));
  CHECK(n.eval(1, 0.0) == 0.0);
  const NormalMixture kurtotic({{2.0 / 3.0, 0.0, 1.0}, {1.0 / 3.0, 0.0, 0.1}});
  CHECK(kurtotic.pdf(0.0) == doctest::Approx(1.59576912160573).epsilon(1e-13));
  CHECK(mixture_preset("mw4").pdf(0.0) == doctest::Approx(1.59576912160573).epsilon(1e-13));
  CHECK_THROWS_AS(n.eval(3, 0.0), std::invalid_argument);
}

TEST_CASE("mixture distribution function examples") {
  const auto n = NormalMixture::standard_normal();
  CHECK(n.cdf(0.0) == 0.5);
  CHECK(n.cdf(std::numeric_limits<double>::infinity()) == 1.0);
  CHECK(n.cdf(-std::numeric_limits<double>::infinity()) == 0.0);
  CHECK(std::abs(n.cdf(1.0) - 0.841344746068543) < 1e-14);
}

TEST_CASE("mixture evaluations agree with oracles on random mixtures") {
  gen::Engine e(201);
  for (int trial = 0; trial < 40; ++trial) {
    const NormalMixture m = gen::mixture(e);
    const auto cs = comps(m);
    for (int k = 0; k < 10; ++k) {
      const double x = gen::uniform(e, -6.0, 6.0);
      CHECK(m.pdf(x) == doctest::Approx(oracle::mix_pdf(cs, x)).epsilon(1e-13));
      CHECK(std::abs(m.cdf(x) - oracle::mix_cdf(cs, x)) < 1e-14);
      const double d = 1e-5;
      const double f1 = (m.pdf(x + d) - m.pdf(x - d)) / (2 * d);
      const double f2 = (m.eval(1, x + d) - m.eval(1, x - d)) / (2 * d);
      CHECK(m.eval(1, x) == doctest::Approx(f1).epsilon(1e-6).scale(1.0));
      CHECK(m.eval(2, x) == doctest::Approx(f2).epsilon(1e-6).scale(1.0));
    }
    const double a = gen::uniform(e, -4.0, 0.0);
    const double b = gen::uniform(e, 0.0, 4.0);
    const double integral = oracle::simpson([&](double x) { return m.pdf(x); }, a, b, 4000);
    CHECK(m.cdf(b) - m.cdf(a) == doctest::Approx(integral).epsilon(1e-10));
  }
}

TEST_CASE("mixture validation") {
  CHECK_THROWS_AS(NormalMixture({}), std::invalid_argument);
  CHECK_THROWS_AS(NormalMixture({{0.5, 0.0, 1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(NormalMixture({{1.0, 0.0, 0.0}}), std::invalid_argument);
  CHECK_THROWS_AS(NormalMixture({{1.2, 0.0, 1.0}, {-0.2, 0.0, 1.0}}), std::invalid_argument);
}

TEST_CASE("presets") {
  const auto names = mixture_preset_names();
  CHECK(names.size() == 11);
  for (const auto& name : names) {
    CAPTURE(name);
    const NormalMixture m = mixture_preset(name);
    double w = 0.0;
    for (const auto& c : m.components()) w += c.weight;
    CHECK(w == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(m.cdf(50.0) == doctest::Approx(1.0));
  }
  try {
    mixture_preset("nope");
    FAIL("expected an exception");
  } catch (const std::invalid_argument& ex) {
    CHECK(std::string(ex.what()).find("mw10") != std::string::npos);
  }
}

TEST_CASE("mixture JSON round trip") {
  gen::Engine e(202);
  for (int trial = 0; trial < 20; ++trial) {
    const NormalMixture m = gen::mixture(e);
    const NormalMixture back = parse_mixture(nlohmann::json(m).dump());
    REQUIRE(back.components().size() == m.components().size());
    for (std::size_t i = 0; i < m.components().size(); ++i) {
      CHECK(back.components()[i].weight == m.components()[i].weight);
      CHECK(back.components()[i].mean == m.components()[i].mean);
      CHECK(back.components()[i].sd == m.components()[i].sd);
    }
  }
  CHECK(parse_mixture("mw2").components().size() == 3);
  CHECK_THROWS_AS(parse_mixture("{\"components\": 3"), std::invalid_argument);
  CHECK_THROWS_AS(parse_mixture("{\"components\": [{\"w\": 1}]}"), std::invalid_argument);
}

TEST_CASE("sampler") {
  const auto n = NormalMixture::standard_normal();
  SUBCASE("deterministic") {
    CHECK(n.sample(5, 42) == n.sample(5, 42));
    CHECK_FALSE(n.sample(5, 42) == n.sample(5, 43));
  }
  SUBCASE("sorted") {
    const Sample s = n.sample(3, 7);
    CHECK(s[0] <= s[1]);
    CHECK(s[1] <= s[2]);
  }
  SUBCASE("moments") {
    const Sample s = n.sample(100000, 1);
    double mean = 0.0, sq = 0.0;
    for (double v : s.values()) {
      mean += v;
      sq += v * v;
    }
    mean /= 1e5;
    CHECK(std::abs(mean) < 0.02);
    CHECK(sq / 1e5 - mean * mean == doctest::Approx(1.0).epsilon(0.02));
  }
  SUBCASE("mixture weights") {
    const NormalMixture m({{0.3, -50.0, 1.0}, {0.7, 50.0, 1.0}});
    const Sample s = m.sample(20000, 9);
    std::size_t left = 0;
    for (double v : s.values()) left += v < 0;
    CHECK(left / 20000.0 == doctest::Approx(0.3).epsilon(0.05));
  }
  SUBCASE("distribution matches the cdf") {
    const auto m = mixture_preset("mw2");
    const Sample s = m.sample(20000, 3);
    double ks = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i)
      ks = std::max({ks, std::abs(m.cdf(s[i]) - (i + 1) / 20000.0), std::abs(m.cdf(s[i]) - i / 20000.0)});
    CHECK(ks < 1.63 / std::sqrt(20000.0));
  }
  CHECK_THROWS_AS(n.sample(0, 1), std::invalid_argument);
}

TEST_CASE("counter rng") {
  const CounterRng a(5), b(5), c(6);
  std::set<std::uint64_t> seen;
  for (std::uint64_t k = 0; k < 1000; ++k) {
    CHECK(a.bits(k) == b.bits(k));
    seen.insert(a.bits(k));
    const double u = a.uniform(k);
    CHECK(u > 0.0);
    CHECK(u < 1.0);
  }
  CHECK(seen.size() == 1000);
  CHECK(a.bits(0) != c.bits(0));
  CHECK(derive_seed(1, 0) != derive_seed(1, 1));
  CHECK(derive_seed(1, 0) != derive_seed(0, 1));
}

TEST_CASE("hdr_oracle standard normal") {
  const auto o = hdr_oracle(NormalMixture::standard_normal(), 0.5);
  const double a = oracle::Phi_inv(0.75);
  CHECK(a == doctest::Approx(0.674489750196082).epsilon(1e-13));
  CHECK(o.level == doctest::Approx(oracle::phi(a)).epsilon(1e-10));
  CHECK(o.level == doctest::Approx(0.31777).epsilon(1e-4));
  REQUIRE(o.region.size() == 1);
  CHECK(o.region[0].lo == doctest::Approx(-a).epsilon(1e-10));
  CHECK(o.region[0].hi == doctest::Approx(a).epsilon(1e-10));
  REQUIRE(o.crossings.size() == 2);
  CHECK(o.crossings[0].slope > 0);
  CHECK(o.crossings[1].slope < 0);
  CHECK(o.crossings[0].slope == doctest::Approx(a * oracle::phi(a)).epsilon(1e-9));
  CHECK(o.crossings[0].curvature == doctest::Approx((a * a - 1) * oracle::phi(a)).epsilon(1e-9));
  CHECK_THROWS_AS(hdr_oracle(NormalMixture::standard_normal(), 0.0), std::invalid_argument);
  CHECK_THROWS_AS(hdr_oracle(NormalMixture::standard_normal(), 1.0), std::invalid_argument);
}

TEST_CASE("hdr_oracle level is monotone in tau") {
  gen::Engine e(203);
  for (const auto& name : {"normal", "mw2", "mw4", "mw6"}) {
    const auto m = mixture_preset(name);
    double prev = 0.0;
    for (double tau = 0.05; tau < 0.96; tau += 0.1) {
      const double t = tau + gen::uniform(e, -0.01, 0.01);
      const double level = hdr_oracle(m, t).level;
      CHECK(level > prev);
      prev = level;
    }
  }
}

TEST_CASE("hdr_oracle invariants across presets") {
  gen::Engine e(204);
  for (const auto& name : mixture_preset_names()) {
    const auto m = mixture_preset(name);
    for (int k = 0; k < 5; ++k) {
      const double tau = gen::uniform(e, 0.05, 0.95);
      HdrOracle o{};
      try {
        o = hdr_oracle(m, tau);
      } catch (const std::domain_error&) {
        continue;
      }
      CAPTURE(name);
      CAPTURE(tau);
      double mass = 0.0;
      for (const auto& iv : o.region.intervals()) mass += m.cdf(iv.hi) - m.cdf(iv.lo);
      CHECK(mass == doctest::Approx(1.0 - tau).epsilon(1e-9));
      REQUIRE(o.crossings.size() == 2 * o.region.size());
      for (std::size_t j = 0; j < o.crossings.size(); ++j) {
        CHECK(std::abs(m.pdf(o.crossings[j].x) - o.level) < 1e-8);
        CHECK((j % 2 == 0 ? o.crossings[j].slope > 0 : o.crossings[j].slope < 0));
      }
    }
  }
}

TEST_CASE("hdr_oracle agrees with a brute-force grid scan") {
  const auto cases = {std::pair{"mw4", 0.2}, std::pair{"mw6", 0.2}, std::pair{"mw7", 0.3}, std::pair{"mw2", 0.5}};
  for (const auto& [name, tau] : cases) {
    CAPTURE(name);
    const auto m = mixture_preset(name);
    const auto want = oracle::grid_hdr([&](double x) { return m.pdf(x); }, -8.0, 8.0, tau);
    const auto o = hdr_oracle(m, tau);
    CHECK(o.level == doctest::Approx(want.level).epsilon(1e-4));
    REQUIRE(o.region.size() == want.intervals.size());
    for (std::size_t i = 0; i < want.intervals.size(); ++i) {
      CHECK(std::abs(o.region[i].lo - want.intervals[i].first) < 1e-3);
      CHECK(std::abs(o.region[i].hi - want.intervals[i].second) < 1e-3);
    }
  }
  const auto kurt = hdr_oracle(mixture_preset("mw4"), 0.2);
  CHECK(kurt.region.size() == 1);
  CHECK(kurt.region.contains(0.0));
  CHECK(hdr_oracle(mixture_preset("mw7"), 0.3).region.size() == 2);
}

TEST_CASE("hdr_oracle rejects a level tangent to the density") {
  // Bisect tau towards the saddle of a symmetric bimodal mixture.
  const auto m = mixture_preset("mw7");
  const double saddle = m.pdf(0.0);
  double lo = 1e-4, hi = 0.95;
  bool threw = false;
  for (int i = 0; i < 200 && !threw; ++i) {
    const double mid = 0.5 * (lo + hi);
    try {
      (hdr_oracle(m, mid).level < saddle ? lo : hi) = mid;
    } catch (const std::domain_error&) {
      threw = true;
    }
    if (mid == lo && mid == hi) break;
  }
  CHECK(threw);
}
