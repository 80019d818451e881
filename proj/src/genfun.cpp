#include "mflt/genfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mflt/errors.hpp"

namespace mflt {

double step_transform(std::span<const double> k) {
  if (k.empty()) throw ArgumentError("step_transform: empty momentum");
  double sum = 0;
  for (double kj : k) sum += std::cos(kj);
  return sum / static_cast<double>(k.size());
}

namespace {

// -log(1 - delta) - delta
double excess_log(double delta) {
  if (delta < 0.25) {
    double term = delta, sum = 0;
    for (int k = 2; k < 200; ++k) {
      term *= delta;
      const double add = term / k;
      sum += add;
      if (add < 1e-18 * sum) break;
    }
    return sum;
  }
  return -std::log1p(-delta) - delta;
}

}  // namespace

double one_point(double z) {
  if (!(z >= 0.0 && z <= 1.0)) throw DomainError("one_point: z must lie in [0, 1]");
  if (z == 0.0) return 0.0;
  if (z == 1.0) return 1.0;
  if (z <= 0.5) {
    // F(t) = log t - t - log z + 1 is increasing and concave on (0, 1);
    // Newton from the left stays left of the root.
    double t = z / std::exp(1.0);
    const double target = std::log(z) - 1.0;
    for (int it = 0; it < 200; ++it) {
      const double step = (std::log(t) - t - target) / (1.0 / t - 1.0);
      t -= step;
      if (std::fabs(step) <= 1e-16 * t) break;
    }
    return t;
  }
  // Near the branch point solve for delta = 1 - t: -log(1-delta) - delta = -log z.
  const double eps = 1.0 - z;
  const double c = -std::log1p(-eps);
  const double p = std::sqrt(2.0 * eps);
  double delta = p - p * p / 3.0 + 11.0 / 72.0 * p * p * p - 43.0 / 540.0 * p * p * p * p;
  delta = std::min(std::max(delta, 1e-300), 0.999);
  for (int it = 0; it < 200; ++it) {
    const double step = (excess_log(delta) - c) * (1.0 - delta) / delta;
    double next = delta - step;
    if (next <= 0) next = delta / 2;
    if (next >= 1) next = (delta + 1) / 2;
    const double change = std::fabs(next - delta);
    delta = next;
    if (change <= 1e-17 * delta) break;
  }
  return 1.0 - delta;
}

ExactWeight coeff_tree_power(int n, int p) {
  if (n < 1) throw ArgumentError("coeff_tree_power: n must be positive");
  if (p < 1 || p > n) return ExactWeight::zero(n);
  const auto un = static_cast<unsigned>(n), up = static_cast<unsigned>(p);
  Rational c(BigInt(p) * power(BigInt(n), un - up), BigInt(n) * factorial(un - up));
  return ExactWeight(c, n);
}

double log_coeff_tree_power(int n, int p) {
  if (n < 1) throw ArgumentError("coeff_tree_power: n must be positive");
  if (p < 1 || p > n) return -std::numeric_limits<double>::infinity();
  const double dn = n, dp = p;
  return std::log(dp) - std::log(dn) + (dn - dp) * std::log(dn) - std::lgamma(dn - dp + 1.0) - dn;
}

double two_point_hat(double z, double zeta, std::span<const double> k) {
  const double t = one_point(z);
  const double den = 1.0 - t * zeta * step_transform(k);
  if (!(den > 0.0)) throw DivergenceError("two_point_hat: 1 - t zeta D(k) vanishes (infinite two-point function)");
  return t / den;
}

double m_point_hat(const Shape& shape, double z, std::span<const double> zetas, std::span<const Momentum> ks) {
  const auto edges = static_cast<std::size_t>(shape.num_edges());
  if (zetas.size() != edges || ks.size() != edges)
    throw ArgumentError("m_point_hat: need one zeta and one momentum per shape edge");
  const double t = one_point(z);
  double value = t;
  for (std::size_t j = 0; j < edges; ++j) {
    const double den = 1.0 - t * zetas[j] * step_transform(ks[j]);
    if (!(den > 0.0)) throw DivergenceError("m_point_hat: divergent edge factor");
    value /= den;
  }
  return value;
}

ExactWeight mpoint_coefficient_exact(int n, std::span<const int> lengths, std::span<const Site> displacements) {
  if (lengths.size() != displacements.size() || lengths.empty())
    throw ArgumentError("mpoint_coefficient_exact: lengths and displacements must match");
  int total = 0, max_len = 0;
  for (int s : lengths) {
    if (s < 0) throw ArgumentError("mpoint_coefficient_exact: negative backbone length");
    total += s;
    max_len = std::max(max_len, s);
  }
  ExactWeight w = coeff_tree_power(n, 1 + total);
  if (w.is_zero()) return w;
  const int d = static_cast<int>(displacements[0].size());
  const auto walks = walk_distributions(max_len, d);
  for (std::size_t j = 0; j < lengths.size(); ++j) {
    const auto& law = walks[static_cast<std::size_t>(lengths[j])];
    auto it = law.find(displacements[j]);
    if (it == law.end()) return ExactWeight::zero(n);
    w *= it->second;
  }
  return w;
}

LatticeDistribution two_point_coefficient_lagrange(int n, int d) {
  LatticeDistribution out(d);
  const auto walks = walk_distributions(n - 1, d);
  for (int s = 0; s < n; ++s) {
    const ExactWeight c = coeff_tree_power(n, s + 1);
    for (const auto& [x, p] : walks[static_cast<std::size_t>(s)]) out.add(x, c * p);
  }
  return out;
}

ExactWeight subshape_coefficient_at_zero(const Subshape& lambda, int n) {
  const int r = static_cast<int>(lambda.labels().size());
  if (r == 0) return coeff_tree_power(n, 1);
  ExactWeight sum = ExactWeight::zero(n);
  // compositions of S into r positive parts: C(S-1, r-1)
  for (int total = r; total <= n - 1; ++total) {
    BigInt ways;
    mpz_bin_uiui(ways.get_mpz_t(), static_cast<unsigned long>(total - 1), static_cast<unsigned long>(r - 1));
    sum += coeff_tree_power(n, 1 + total) * Rational(ways);
  }
  return sum;
}

namespace {

// Neumaier-compensated sum.
struct CompensatedSum {
  double sum = 0, carry = 0;
  void add(double x) {
    const double t = sum + x;
    if (std::fabs(sum) >= std::fabs(x))
      carry += (sum - t) + x;
    else
      carry += (x - t) + sum;
    sum = t;
  }
  double value() const { return sum + carry; }
};

}  // namespace

double t_hat_coefficient(const Shape& shape, int n, std::span<const Momentum> ks) {
  const auto edges = static_cast<std::size_t>(shape.num_edges());
  if (ks.size() != edges) throw ArgumentError("t_hat_coefficient: need one momentum per shape edge");
  if (n < 1) throw ArgumentError("t_hat_coefficient: n must be positive");
  if (edges > 1 && n > kMultiEdgeCoefficientCap)
    throw CapError("t_hat_coefficient: n above cap " + std::to_string(kMultiEdgeCoefficientCap) + " for m >= 3");

  // h[S] = complete homogeneous symmetric polynomial of degree S in D(k_j).
  const auto len = static_cast<std::size_t>(n);
  std::vector<double> h(len, 0.0);
  h[0] = 1.0;
  const double d0 = step_transform(ks[0]);
  for (std::size_t s = 1; s < len; ++s) h[s] = h[s - 1] * d0;
  for (std::size_t j = 1; j < edges; ++j) {
    const double dj = step_transform(ks[j]);
    for (std::size_t s = 1; s < len; ++s) h[s] += dj * h[s - 1];
  }
  CompensatedSum sum;
  for (int s = 0; s < n; ++s) sum.add(std::exp(log_coeff_tree_power(n, s + 1)) * h[static_cast<std::size_t>(s)]);
  return sum.value();
}

double t_hat_coefficient_fixed_s(int n, std::span<const Momentum> ks, std::span<const int> lengths) {
  if (ks.size() != lengths.size() || ks.empty())
    throw ArgumentError("t_hat_coefficient_fixed_s: need one length per momentum");
  int total = 0;
  double product = 1.0;
  for (std::size_t j = 0; j < ks.size(); ++j) {
    if (lengths[j] < 0) throw ArgumentError("t_hat_coefficient_fixed_s: negative length");
    total += lengths[j];
    product *= std::pow(step_transform(ks[j]), lengths[j]);
  }
  const double logc = log_coeff_tree_power(n, 1 + total);
  return std::isinf(logc) ? 0.0 : std::exp(logc) * product;
}

}  // namespace mflt
