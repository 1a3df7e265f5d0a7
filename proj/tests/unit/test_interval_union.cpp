#include <doctest.h>

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "generators.hpp"
#include "hdrband/hdr.hpp"
#include "hdrband/interval_union.hpp"
#include "oracles.hpp"

using namespace hdrband;

namespace {

std::vector<std::pair<double, double>> pairs(const IntervalUnion& u) {
  std::vector<std::pair<double, double>> out;
  for (const auto& iv : u.intervals()) out.push_back({iv.lo, iv.hi});
  return out;
}

}  // namespace

TEST_CASE("interval union canonical form") {
  const IntervalUnion u({{3, 4}, {0, 1}, {0.5, 2}, {2, 2.5}});
  REQUIRE(u.size() == 2);
  CHECK(u[0] == Interval{0, 2.5});
  CHECK(u[1] == Interval{3, 4});
  CHECK(u.length() == doctest::Approx(3.5));
  CHECK(u.contains(0.0));
  CHECK(u.contains(2.5));
  CHECK_FALSE(u.contains(2.7));
  CHECK_FALSE(u.contains(-1.0));
  CHECK(IntervalUnion().empty());
  CHECK_THROWS_AS(IntervalUnion({{1, 0}}), std::invalid_argument);
  CHECK_THROWS_AS(IntervalUnion({{0, std::numeric_limits<double>::quiet_NaN()}}), std::invalid_argument);
  CHECK_THROWS_AS(IntervalUnion({{0, std::numeric_limits<double>::infinity()}}), std::invalid_argument);
}

TEST_CASE("canonical form is sorted, disjoint and order independent") {
  gen::Engine e(301);
  for (int trial = 0; trial < 300; ++trial) {
    auto raw = gen::raw_intervals(e, 8);
    const IntervalUnion u(raw);
    for (std::size_t i = 0; i + 1 < u.size(); ++i) CHECK(u[i].hi < u[i + 1].lo);
    std::shuffle(raw.begin(), raw.end(), e);
    CHECK(IntervalUnion(raw) == u);
    for (int k = 0; k < 20; ++k) {
      const double x = gen::uniform(e, -6.0, 9.0);
      bool in = false;
      for (const auto& iv : raw) in = in || (x >= iv.lo && x <= iv.hi);
      CHECK(u.contains(x) == in);
    }
  }
}

TEST_CASE("symmetric difference mass examples") {
  const auto n = NormalMixture::standard_normal();
  const IntervalUnion a({{-0.67449, 0.67449}});
  CHECK(symmetric_difference_mass(a, a, n) == 0.0);
  CHECK(symmetric_difference_mass(a, IntervalUnion(), n) ==
        doctest::Approx(2 * oracle::Phi(0.67449) - 1).epsilon(1e-14));
  CHECK(symmetric_difference_mass(a, IntervalUnion(), n) == doctest::Approx(0.5).epsilon(1e-5));
  CHECK(symmetric_difference_mass(IntervalUnion({{0, 1}}), IntervalUnion({{0, 2}}), n) ==
        doctest::Approx(0.135905121983278).epsilon(1e-13));
}

TEST_CASE("mu_f axioms on random unions") {
  gen::Engine e(302);
  for (int trial = 0; trial < 500; ++trial) {
    const NormalMixture m = trial % 3 ? NormalMixture::standard_normal() : gen::mixture(e);
    const IntervalUnion a = gen::interval_union(e), b = gen::interval_union(e), c = gen::interval_union(e);
    CHECK(a.symmetric_difference(a).empty());
    CHECK(symmetric_difference_mass(a, a, m) == 0.0);
    CHECK(a.symmetric_difference(b) == b.symmetric_difference(a));
    const double ab = symmetric_difference_mass(a, b, m);
    CHECK(ab == symmetric_difference_mass(b, a, m));
    CHECK(ab >= 0.0);
    CHECK(ab <= 1.0);
    const double ac = symmetric_difference_mass(a, c, m);
    const double bc = symmetric_difference_mass(b, c, m);
    CHECK(ac <= ab + bc + 4 * std::numeric_limits<double>::epsilon());
    CHECK(symmetric_difference_mass(a, IntervalUnion(), m) ==
          doctest::Approx(oracle::sym_diff_mass(pairs(a), {}, [&](double x) { return m.cdf(x); }))
              .epsilon(1e-12));
    const auto cdf = [&](double x) { return m.cdf(x); };
    CHECK(std::abs(ab - oracle::sym_diff_mass(pairs(a), pairs(b), cdf)) < 1e-12);
  }
}

TEST_CASE("symmetric difference point membership") {
  gen::Engine e(303);
  for (int trial = 0; trial < 200; ++trial) {
    const IntervalUnion a = gen::interval_union(e), b = gen::interval_union(e);
    const IntervalUnion d = a.symmetric_difference(b);
    for (int k = 0; k < 30; ++k) {
      const double x = gen::uniform(e, -6.0, 9.0);
      const bool on_edge = [&] {
        for (const auto* u : {&a, &b})
          for (const auto& iv : u->intervals())
            if (x == iv.lo || x == iv.hi) return true;
        return false;
      }();
      if (!on_edge) CHECK(d.contains(x) == (a.contains(x) != b.contains(x)));
    }
  }
}

TEST_CASE("interval union serialization") {
  const IntervalUnion u({{-1.5, 0.25}, {2, 3}});
  const nlohmann::json j = u;
  CHECK(j.dump() == "[[-1.5,0.25],[2.0,3.0]]");
  CHECK(j.get<IntervalUnion>() == u);
  std::ostringstream os;
  write_csv(os, u);
  const std::string text = os.str();
  CHECK(text.rfind("lo,hi\n", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 3);
}
