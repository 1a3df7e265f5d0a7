#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "generators.hpp"
#include "hdrband/density.hpp"
#include "oracles.hpp"

using namespace hdrband;

TEST_CASE("sample") {
  const Sample s({3.0, -1.0, 2.0});
  CHECK(s.size() == 3);
  CHECK(s.min() == -1.0);
  CHECK(s.max() == 3.0);
  CHECK(s[1] == 2.0);
  const Sample t = s.affine(1.0, 2.0);
  CHECK(t.min() == -1.0);
  CHECK(t.max() == 7.0);
  CHECK_THROWS_AS(s.affine(0.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(Sample({1.0, std::nan("")}), std::invalid_argument);
}

TEST_CASE("kde_evaluate examples") {
  CHECK(kde_evaluate(Sample({0.0}), 1.0, 0, 0.0) == doctest::Approx(0.3989423).epsilon(1e-7));
  CHECK(kde_evaluate(Sample({-1.0, 1.0}), 1.0, 0, 0.0) == doctest::Approx(0.2419707).epsilon(1e-7));
  CHECK(kde_evaluate(Sample({-1.0, 1.0}), 1.0, 0, 0.0) == doctest::Approx(oracle::phi(1.0)).epsilon(1e-15));
  CHECK(std::abs(kde_evaluate(Sample({-1.0, 1.0}), 1.0, 1, 0.0)) < 1e-17);
  CHECK_THROWS_AS(kde_evaluate(Sample({0.0}), 0.0, 0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(kde_evaluate(Sample({0.0}), 1.0, 3, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(kde_evaluate(Sample({0.0}), 1.0, 0, std::vector<double>{}), std::invalid_argument);
}

TEST_CASE("kde_evaluate matches the direct-sum oracle") {
  gen::Engine e(401);
  for (int trial = 0; trial < 60; ++trial) {
    const auto xs = gen::normal_values(e, gen::integer(e, 1, 300), gen::uniform(e, -2, 2), gen::uniform(e, 0.3, 3));
    const Sample s(xs);
    const double h = gen::uniform(e, 0.05, 2.0);
    const int order = gen::integer(e, 0, 2);
    std::vector<double> pts(17);
    for (auto& p : pts) p = gen::uniform(e, -6, 6);
    const auto got = kde_evaluate(s, h, order, pts);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const double want = oracle::kde(xs, h, order, pts[i]);
      CHECK(std::abs(got[i] - want) <= 1e-12 * std::max(1.0, std::abs(want)));
      CHECK(kde_evaluate(s, h, order, pts[i]) == got[i]);
    }
  }
}

TEST_CASE("linear binning") {
  const auto grid = EvaluationGrid::uniform(0.0, 4.0, 5);
  SUBCASE("on a grid point") {
    const auto b = linear_bin(Sample({2.0}), grid);
    CHECK(b.bin_weights == std::vector<double>{0, 0, 1, 0, 0});
  }
  SUBCASE("at a midpoint") {
    const auto b = linear_bin(Sample({2.5}), grid);
    CHECK(b.bin_weights[2] == 0.5);
    CHECK(b.bin_weights[3] == 0.5);
  }
  SUBCASE("endpoints") {
    const auto b = linear_bin(Sample({0.0, 4.0}), grid);
    CHECK(b.bin_weights.front() == 1.0);
    CHECK(b.bin_weights.back() == 1.0);
  }
  SUBCASE("outside") { CHECK_THROWS_AS(linear_bin(Sample({4.5}), grid), std::invalid_argument); }
  SUBCASE("conservation and first moment") {
    gen::Engine e(402);
    std::vector<double> xs(1000);
    for (auto& x : xs) x = gen::uniform(e, 0.0, 4.0);
    const auto b = linear_bin(Sample(xs), EvaluationGrid::uniform(0.0, 4.0, 97));
    double total = 0.0, first = 0.0, want = 0.0;
    for (std::size_t i = 0; i < b.count; ++i) {
      total += b.bin_weights[i];
      first += b.bin_weights[i] * b.point(i);
    }
    for (double x : xs) want += x;
    CHECK(total == doctest::Approx(1000.0).epsilon(1e-12));
    CHECK(first == doctest::Approx(want).epsilon(1e-12));
  }
}

TEST_CASE("evaluation grid") {
  CHECK_THROWS_AS(EvaluationGrid::uniform(1.0, 1.0, 10), std::invalid_argument);
  CHECK_THROWS_AS(EvaluationGrid::uniform(0.0, 1.0, 1), std::invalid_argument);
  const auto g = EvaluationGrid::uniform(-1.0, 1.0, 5);
  CHECK(g.step() == 0.5);
  CHECK(g.point(4) == 1.0);
  CHECK(g.points() == std::vector<double>{-1.0, -0.5, 0.0, 0.5, 1.0});
  const Sample s({-2.0, 3.0});
  const auto d = default_grid(s, 0.5);
  CHECK(d.lo == doctest::Approx(-5.0));
  CHECK(d.hi == doctest::Approx(6.0));
  CHECK(d.count == 1024);
}

TEST_CASE("binned curve agrees with the exact curve") {
  gen::Engine e(403);
  const auto xs = gen::normal_values(e, 1000);
  const Sample s(xs);
  for (double h : {0.15, 0.3, 0.6}) {
    const auto grid = default_grid(s, h, 1024);
    for (int order = 0; order <= 2; ++order) {
      const auto binned = kde_on_grid(s, h, order, grid, true);
      const auto exact = kde_on_grid(s, h, order, grid, false);
      double dev = 0.0, peak = 0.0;
      for (std::size_t i = 0; i < grid.count; ++i) {
        dev = std::max(dev, std::abs(binned.values[i] - exact.values[i]));
        peak = std::max(peak, std::abs(exact.values[i]));
      }
      CAPTURE(h);
      CAPTURE(order);
      CHECK(dev < (order == 0 ? 1e-3 : 5e-3) * peak);
      CHECK(exact.values[100] == doctest::Approx(oracle::kde(xs, h, order, grid.point(100))).epsilon(1e-12));
    }
  }
}

TEST_CASE("density curve integrates to one") {
  gen::Engine e(404);
  for (int trial = 0; trial < 10; ++trial) {
    const Sample s = gen::normal_sample(e, gen::integer(e, 50, 2000), 0.0, gen::uniform(e, 0.5, 5));
    const double h = gen::uniform(e, 0.1, 1.0) * (s.max() - s.min()) / 10;
    const auto curve = kde_on_grid(s, h, 0, default_grid(s, h, 1024), true);
    CHECK(curve.integral() == doctest::Approx(1.0).epsilon(1e-4));
  }
}

TEST_CASE("wider bandwidth lowers the mode of a unimodal layout") {
  gen::Engine e(405);
  for (int trial = 0; trial < 10; ++trial) {
    const Sample s = gen::normal_sample(e, 500);
    const double h = gen::uniform(e, 0.1, 0.5);
    const auto grid = default_grid(s, 2 * h, 2048);
    CHECK(kde_on_grid(s, 2 * h, 0, grid, true).max_value() < kde_on_grid(s, h, 0, grid, true).max_value());
  }
}

TEST_CASE("density curve csv") {
  const Sample s({0.0, 1.0});
  const auto curve = kde_on_grid(s, 0.5, 0, EvaluationGrid::uniform(-1, 2, 4), false);
  std::ostringstream os;
  write_csv(os, curve);
  const std::string text = os.str();
  CHECK(text.rfind("x,value\n", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 5);
}
