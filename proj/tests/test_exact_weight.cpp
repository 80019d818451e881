#include <doctest.h>

#include <cmath>

#include "mflt/errors.hpp"
#include "mflt/exact_weight.hpp"

using namespace mflt;

TEST_CASE("weights are kept in lowest terms") {
  ExactWeight w(Rational(BigInt(2), BigInt(4)), 3);
  CHECK(w.coeff() == Rational(1, 2));
  CHECK(w.coeff().get_den() == 2);
  CHECK(w.epow() == 3);
  CHECK_THROWS_AS(ExactWeight(Rational(1), -1), ArgumentError);
}

TEST_CASE("sums need equal powers of e, products add them") {
  ExactWeight a(Rational(1, 3), 2), b(Rational(1, 6), 2), c(Rational(1), 1);
  CHECK(a + b == ExactWeight(Rational(1, 2), 2));
  CHECK(a - b == ExactWeight(Rational(1, 6), 2));
  CHECK_THROWS_AS(a + c, ArgumentError);
  CHECK(a * c == ExactWeight(Rational(1, 3), 3));
  CHECK(ratio(a, b) == 2);
  CHECK_THROWS_AS(ratio(a, c), ArgumentError);
  CHECK(ExactWeight::zero(4).is_zero());
}

TEST_CASE("floating views") {
  ExactWeight w(Rational(3, 2), 3);
  CHECK(w.to_double() == doctest::Approx(1.5 * std::exp(-3.0)).epsilon(1e-14));
  CHECK(w.log_abs() == doctest::Approx(std::log(1.5) - 3).epsilon(1e-14));
  ExactWeight huge(Rational(factorial(1000)), 5);
  CHECK(huge.log_abs() == doctest::Approx(std::lgamma(1001.0) - 5).epsilon(1e-13));
  CHECK(std::isinf(ExactWeight::zero(0).log_abs()));
}

TEST_CASE("json round trip") {
  ExactWeight w(Rational(BigInt("123456789012345678901234567891"), BigInt(10)), 11);
  nlohmann::json j = w;
  CHECK(j.at("num") == "123456789012345678901234567891");
  CHECK(j.at("den") == "10");
  CHECK(j.at("epow") == 11);
  CHECK(j.get<ExactWeight>() == w);
}

TEST_CASE("integer helpers") {
  CHECK(factorial(0) == 1);
  CHECK(factorial(10) == 3628800);
  CHECK(power(BigInt(3), 4) == 81);
  CHECK(double_factorial_odd(0) == 1);
  CHECK(double_factorial_odd(1) == 1);
  CHECK(double_factorial_odd(3) == 15);
  CHECK(double_factorial_odd(4) == 105);
  CHECK(to_string(Rational(-1, 2)) == "-1/2");
}
