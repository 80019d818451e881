#include "mflt/exact_weight.hpp"

#include <cmath>
#include <limits>

#include "mflt/errors.hpp"

namespace mflt {

BigInt factorial(unsigned n) {
  BigInt r;
  mpz_fac_ui(r.get_mpz_t(), n);
  return r;
}

BigInt power(const BigInt& base, unsigned exponent) {
  BigInt r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), exponent);
  return r;
}

BigInt double_factorial_odd(int k) {
  BigInt r = 1;
  for (int j = 2 * k - 1; j > 1; j -= 2) r *= j;
  return r;
}

std::string to_string(const Rational& q) { return q.get_str(); }

ExactWeight::ExactWeight(Rational coeff, int epow) : coeff_(std::move(coeff)), epow_(epow) {
  coeff_.canonicalize();
  if (epow_ < 0) throw ArgumentError("ExactWeight: negative power of e");
}

ExactWeight& ExactWeight::operator+=(const ExactWeight& other) {
  if (epow_ != other.epow_)
    throw ArgumentError("ExactWeight: adding e^-" + std::to_string(epow_) + " and e^-" +
                        std::to_string(other.epow_));
  coeff_ += other.coeff_;
  return *this;
}

ExactWeight& ExactWeight::operator-=(const ExactWeight& other) {
  if (epow_ != other.epow_)
    throw ArgumentError("ExactWeight: subtracting e^-" + std::to_string(other.epow_) +
                        " from e^-" + std::to_string(epow_));
  coeff_ -= other.coeff_;
  return *this;
}

ExactWeight& ExactWeight::operator*=(const ExactWeight& other) {
  coeff_ *= other.coeff_;
  epow_ += other.epow_;
  return *this;
}

ExactWeight& ExactWeight::operator*=(const Rational& factor) {
  coeff_ *= factor;
  return *this;
}

Rational ratio(const ExactWeight& num, const ExactWeight& den) {
  if (num.epow_ != den.epow_) throw ArgumentError("ratio: weights carry different powers of e");
  if (den.coeff_ == 0) throw DomainError("ratio: zero denominator");
  return Rational(num.coeff_ / den.coeff_);
}

namespace {
double log_abs_int(const mpz_class& z) {
  long exp2 = 0;
  double mant = mpz_get_d_2exp(&exp2, z.get_mpz_t());
  return std::log(std::fabs(mant)) + static_cast<double>(exp2) * std::log(2.0);
}
}  // namespace

double ExactWeight::log_abs() const {
  if (coeff_ == 0) return -std::numeric_limits<double>::infinity();
  return log_abs_int(coeff_.get_num()) - log_abs_int(coeff_.get_den()) - epow_;
}

double ExactWeight::to_double() const {
  if (coeff_ == 0) return 0.0;
  double v = std::exp(log_abs());
  return sgn(coeff_) < 0 ? -v : v;
}

std::string ExactWeight::to_string() const {
  return coeff_.get_str() + "*e^-" + std::to_string(epow_);
}

void to_json(nlohmann::json& j, const ExactWeight& w) {
  j = nlohmann::json{{"num", w.coeff().get_num().get_str()},
                     {"den", w.coeff().get_den().get_str()},
                     {"epow", w.epow()}};
}

void from_json(const nlohmann::json& j, ExactWeight& w) {
  Rational q(BigInt(j.at("num").get<std::string>()), BigInt(j.at("den").get<std::string>()));
  w = ExactWeight(q, j.at("epow").get<int>());
}

}  // namespace mflt
