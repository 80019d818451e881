#pragma once

#include <gmpxx.h>

#include <string>

#include <json.hpp>

namespace mflt {

using BigInt = mpz_class;
using Rational = mpq_class;

BigInt factorial(unsigned n);
BigInt power(const BigInt& base, unsigned exponent);
/// (2k-1)!! with (-1)!! = 1.
BigInt double_factorial_odd(int k);
std::string to_string(const Rational& q);

/// An exact value coeff * e^{-epow}.
///
/// Sums are only defined between weights carrying the same power of e; a
/// product adds the powers. The coefficient is always kept in lowest terms.
class ExactWeight {
 public:
  ExactWeight() = default;
  ExactWeight(Rational coeff, int epow);

  static ExactWeight zero(int epow) { return ExactWeight(Rational(0), epow); }

  const Rational& coeff() const { return coeff_; }
  int epow() const { return epow_; }
  bool is_zero() const { return coeff_ == 0; }

  ExactWeight& operator+=(const ExactWeight& other);
  ExactWeight& operator-=(const ExactWeight& other);
  ExactWeight& operator*=(const ExactWeight& other);
  ExactWeight& operator*=(const Rational& factor);

  friend ExactWeight operator+(ExactWeight a, const ExactWeight& b) { return a += b; }
  friend ExactWeight operator-(ExactWeight a, const ExactWeight& b) { return a -= b; }
  friend ExactWeight operator*(ExactWeight a, const ExactWeight& b) { return a *= b; }
  friend ExactWeight operator*(ExactWeight a, const Rational& b) { return a *= b; }
  friend ExactWeight operator*(const Rational& b, ExactWeight a) { return a *= b; }

  friend bool operator==(const ExactWeight& a, const ExactWeight& b) {
    return a.epow_ == b.epow_ && a.coeff_ == b.coeff_;
  }

  /// Ratio of two weights with equal epow.
  friend Rational ratio(const ExactWeight& num, const ExactWeight& den);

  /// Natural log of |value|; -inf for zero. Safe for coefficients far outside
  /// double range.
  double log_abs() const;
  double to_double() const;
  std::string to_string() const;

 private:
  Rational coeff_{0};
  int epow_ = 0;
};

void to_json(nlohmann::json& j, const ExactWeight& w);
void from_json(const nlohmann::json& j, ExactWeight& w);

}  // namespace mflt
