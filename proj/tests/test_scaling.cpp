#include <doctest.h>

#include <cmath>
#include <numbers>

#include "mflt/errors.hpp"
#include "mflt/scaling.hpp"

using namespace mflt;

TEST_CASE("Stirling ratios") {
  const std::vector<long> ns{1, 10, 100, 1000, 10000};
  const auto report = stirling_check(ns);
  CHECK(report.rows[0].ratio == doctest::Approx(std::exp(-1.0) * std::sqrt(2 * std::numbers::pi)).epsilon(1e-12));
  CHECK(std::abs(report.rows[2].ratio - 1) < 0.01);
  for (std::size_t i = 1; i + 1 < report.rows.size(); ++i) {
    const double shrink = std::abs(report.rows[i].ratio - 1) / std::abs(report.rows[i + 1].ratio - 1);
    CHECK(shrink == doctest::Approx(10).epsilon(0.05));
  }
  // exact and floating branches agree across the switch
  const std::vector<long> around{1999, 2000, 2001};
  const auto r = stirling_check(around);
  CHECK(r.rows[1].ratio == doctest::Approx(r.rows[2].ratio).epsilon(1e-6));
}

TEST_CASE("two-point asymptotics at k = 0 reduce to the size law") {
  const std::vector<long> ns{10, 100, 1000};
  const Momentum zero{0.0};
  const auto lemma = lemma41_check(zero, ns);
  const auto stirling = stirling_check(ns);
  for (std::size_t i = 0; i < ns.size(); ++i)
    CHECK(lemma.rows[i].ratio == doctest::Approx(stirling.rows[i].ratio).epsilon(1e-7));
}

TEST_CASE("two-point asymptotic ratio is continuous in k") {
  const std::vector<long> ns{500};
  const double a = lemma41_check(Momentum{1e-4}, ns).rows[0].ratio;
  const double b = lemma41_check(Momentum{0.0}, ns).rows[0].ratio;
  CHECK(a == doctest::Approx(b).epsilon(1e-6));
}

TEST_CASE("fixed backbone length targets") {
  const std::vector<long> ns{10000};
  const auto base = lemma42_check(Momentum{0.0}, 1.0, ns);
  CHECK(base.rows[0].predicted == doctest::Approx(std::exp(-0.5) / std::sqrt(2 * std::numbers::pi) / 10000));
  const auto moved = lemma42_check(Momentum{1.0}, 1.0, ns);
  CHECK(moved.rows[0].predicted / base.rows[0].predicted == doctest::Approx(std::exp(-0.5)));
  CHECK(moved.rows[0].observed / base.rows[0].observed == doctest::Approx(std::exp(-0.5)).epsilon(0.01));
  CHECK_THROWS_AS(lemma42_check(Momentum{0.0}, 0.0, ns), ArgumentError);
}

TEST_CASE("Monte Carlo moments") {
  MonteCarloOptions options;
  options.n = 64;
  options.samples = 2000;
  options.seed = 11;
  options.batches = 20;
  const std::vector<std::vector<Momentum>> sets{{Momentum{0.0}}, {Momentum{1.0}}};
  const std::vector<std::vector<Momentum>> pair{{Momentum{1.0}, Momentum{-1.0}}};
  auto est = moment_convergence_mc(options, sets);
  est.push_back(moment_convergence_mc(options, pair).front());
  CHECK(est[0].mean_re == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(est[0].stderr_re == doctest::Approx(0.0));
  CHECK(std::abs(est[1].mean_im) < 4 * est[1].stderr_im + 1e-12);
  CHECK(est[2].mean_re >= 0);
  CHECK(est[2].mean_re <= 1);
  CHECK(std::abs(est[2].mean_im) < 1e-12);

  SUBCASE("bit-identical across reruns and thread counts") {
    auto threaded = options;
    threaded.threads = 3;
    const auto again = moment_convergence_mc(threaded, sets);
    for (std::size_t i = 0; i < again.size(); ++i) {
      CHECK(again[i].mean_re == est[i].mean_re);
      CHECK(again[i].mean_im == est[i].mean_im);
      CHECK(again[i].stderr_re == est[i].stderr_re);
    }
  }
  SUBCASE("argument checks") {
    auto bad = options;
    bad.samples = 0;
    CHECK_THROWS_AS(moment_convergence_mc(bad, sets), ArgumentError);
    const std::vector<std::vector<Momentum>> mixed{{Momentum{0.0}}, {Momentum{0.0, 1.0}}};
    CHECK_THROWS_AS(moment_convergence_mc(options, mixed), ArgumentError);
  }
}

TEST_CASE("degenerate decomposition at k = 0") {
  const auto two = degenerate_decomposition(2);
  CHECK(two.u.is_zero());
  CHECK(two.s == ExactWeight(Rational(8), 2));
  CHECK(two.e == ExactWeight(Rational(8), 2));
  CHECK(two.shape_sum == ExactWeight(Rational(18), 2));
  CHECK(two.multiplicity_bound == 2);
  CHECK(two.identity_holds);
  CHECK(two.bound_holds);
  for (int n = 1; n <= 5; ++n) {
    const auto dec = degenerate_decomposition(n);
    CHECK(dec.identity_holds);
    CHECK(dec.bound_holds);
    CHECK(dec.shape_sum == dec.shape_sum_formula);
  }
    // a full 4-skeleton needs six vertices
  CHECK(degenerate_decomposition(5).u.is_zero());
  CHECK_FALSE(degenerate_decomposition(6).u.is_zero());
  CHECK_THROWS_AS(degenerate_decomposition(8), CapError);
}

TEST_CASE("pointwise decomposition at (0, 0, e1)") {
  for (int d = 1; d <= 3; ++d) {
    const std::vector<Site> targets{origin(d), origin(d), unit_vector(d, 0)};
    const auto dec = degenerate_decomposition_at(2, d, targets);
    const ExactWeight one_class(Rational(1, 2 * d), 2);
    CHECK(dec.s == one_class);
    CHECK(dec.u.is_zero());
    CHECK(dec.e == one_class);
    CHECK(dec.shape_sum == one_class * Rational(3));
    CHECK(dec.shape_sum - dec.s == dec.e * Rational(2));
    CHECK(dec.bound_holds);
  }
}
