#include <doctest.h>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>

#include "mflt/errors.hpp"
#include "mflt/ise.hpp"
#include "mflt/quadrature.hpp"

using namespace mflt;

namespace {

// Integral over the simplex {t >= 0, sum t = T} of prod exp(-a_j t_j), as a
// divided difference of exp(-a T); rates must be distinct.
double simplex_integral(const std::vector<double>& a, double T) {
  double sum = 0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    double den = 1;
    for (std::size_t i = 0; i < a.size(); ++i)
      if (i != j) den *= a[i] - a[j];
    sum += std::exp(-a[j] * T) / den;
  }
  return sum;
}

double reference_A(const std::vector<double>& a) {
  boost::math::quadrature::exp_sinh<double> integrator;
  return integrator.integrate([&](double T) { return T * std::exp(-T * T / 2) * simplex_integral(a, T); });
}

}  // namespace

TEST_CASE("Gauss-Legendre rules integrate polynomials") {
  for (int n : {1, 4, 16}) {
    const auto rule = gauss_legendre(n);
    double weight = 0, moment = 0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      weight += rule.weights[i];
      moment += rule.weights[i] * std::pow(rule.nodes[i], 2 * n - 1);
    }
    CHECK(weight == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(moment == doctest::Approx(1.0 / (2 * n)).epsilon(1e-13));
  }
}

TEST_CASE("integrand") {
  const auto shape = enumerate_shapes(3).front();
  const std::vector<Momentum> ks{Momentum{1.0}, Momentum{0.0}, Momentum{2.0}};
  const std::vector<double> t{0.5, 0.25, 1.0};
  const double total = 1.75;
  CHECK(a_hat(shape, ks, t) ==
        doctest::Approx(total * std::exp(-total * total / 2) * std::exp(-0.5 * 0.5) * std::exp(-4.0 * 1.0 / 2)));
  const std::vector<std::vector<double>> ys{{0.0}, {0.0}, {0.3}};
  const std::vector<double> with_zero{0.5, 0.0, 1.0};
  CHECK(a_density(shape, ys, with_zero).degenerate);
  CHECK_FALSE(a_density(shape, ys, t).degenerate);
}

TEST_CASE("normalisation at k = 0") {
  CHECK(A_hat_at_zero_closed_form(2) == doctest::Approx(1.0));
  CHECK(A_hat_at_zero_closed_form(3) == doctest::Approx(1.0));
  CHECK(A_hat_at_zero_closed_form(4) == doctest::Approx(1.0 / 3));
  for (int m = 2; m <= 3; ++m) {
    const auto shape = enumerate_shapes(m).front();
    const std::vector<Momentum> zero(static_cast<std::size_t>(shape.num_edges()), Momentum{0.0});
    CHECK(A_hat(shape, zero) == doctest::Approx(A_hat_at_zero_closed_form(m)).epsilon(1e-7));
  }
}

TEST_CASE("two-point limit against one-dimensional quadrature") {
  const auto two = enumerate_shapes(2).front();
  for (double k2 : {0.5, 1.0, 2.0, 5.0}) {
    const std::vector<Momentum> ks{Momentum{std::sqrt(k2)}};
    const double reference = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        [&](double t) { return t * std::exp(-t * t / 2 - k2 * t / 2); }, 0.0, std::numeric_limits<double>::infinity());
    CHECK(A_hat(two, ks) == doctest::Approx(reference).epsilon(1e-7));
  }
  const std::vector<Momentum> k2{Momentum{std::sqrt(2.0)}};
  CHECK(A_hat(two, k2) == doctest::Approx(0.34432).epsilon(1e-4));
}

TEST_CASE("three-edge limit against divided differences") {
  const auto three = enumerate_shapes(3).front();
  const std::vector<Momentum> ks{Momentum{0.5}, Momentum{1.0}, Momentum{1.5}};
  const std::vector<double> rates{0.125, 0.5, 1.125};
  CHECK(A_hat(three, ks) == doctest::Approx(reference_A(rates)).epsilon(1e-7));
}

TEST_CASE("edge momenta and moment characteristic function") {
  const auto three = enumerate_shapes(3).front();
  const std::vector<Momentum> external{Momentum{1.0, 0.0}, Momentum{0.5, 2.0}};
  const auto edges = edge_momenta(three, external);
  CHECK(edges[0] == Momentum{1.5, 2.0});
  CHECK(edges[1] == Momentum{1.0, 0.0});
  CHECK(edges[2] == Momentum{0.5, 2.0});
  const std::vector<Momentum> one{Momentum{0.7}};
  const std::vector<Momentum> two_edges{Momentum{0.7}};
  CHECK(moment_char(one) == doctest::Approx(A_hat(enumerate_shapes(2).front(), two_edges)));
  const std::vector<Momentum> four(4, Momentum{0.0});
  CHECK_THROWS_AS(moment_char(four), CapError);
}

TEST_CASE("quadrature budget") {
  const auto shape = enumerate_shapes(3).front();
  const std::vector<Momentum> ks(3, Momentum{1.0});
  QuadratureOptions tight;
  tight.abs_tolerance = 1e-15;
  tight.max_evaluations = 5000;
  CHECK_THROWS_AS(A_hat(shape, ks, tight), QuadratureError);
}

TEST_CASE("first moment density has unit mass") {
  double mass = 0;
  const double h = 0.01;
  for (int i = -1000; i <= 1000; ++i) {
    const std::vector<double> x{i * h};
    mass += first_moment_density(x) * h;
  }
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-4));
}
