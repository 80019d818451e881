#include "mflt/ise.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <numbers>

#include "mflt/errors.hpp"
#include "mflt/quadrature.hpp"

namespace mflt {

namespace {

double norm2(std::span<const double> v) {
  double s = 0;
  for (double c : v) s += c * c;
  return s;
}

void check_edges(const Shape& shape, std::size_t count, const char* what) {
  if (count != static_cast<std::size_t>(shape.num_edges()))
    throw ArgumentError(std::string(what) + ": need one entry per shape edge");
}

}  // namespace

double a_hat(const Shape& shape, std::span<const Momentum> ks, std::span<const double> times) {
  check_edges(shape, ks.size(), "a_hat");
  check_edges(shape, times.size(), "a_hat");
  double total = 0, exponent = 0;
  for (std::size_t j = 0; j < times.size(); ++j) {
    if (times[j] < 0) throw ArgumentError("a_hat: negative time");
    total += times[j];
    exponent -= norm2(ks[j]) * times[j] / 2;
  }
  return total * std::exp(exponent - total * total / 2);
}

DensityValue a_density(const Shape& shape, std::span<const std::vector<double>> ys, std::span<const double> times) {
  check_edges(shape, ys.size(), "a_density");
  check_edges(shape, times.size(), "a_density");
  DensityValue out;
  double total = 0, log_value = 0;
  for (std::size_t j = 0; j < times.size(); ++j) {
    const double t = times[j];
    if (t < 0) throw ArgumentError("a_density: negative time");
    total += t;
    const double y2 = norm2(ys[j]);
    if (t == 0) {
      out.degenerate = true;
      if (y2 != 0) return out;
      continue;
    }
    const double d = static_cast<double>(ys[j].size());
    log_value += -0.5 * d * std::log(2 * std::numbers::pi * t) - y2 / (2 * t);
  }
  out.value = total * std::exp(log_value - total * total / 2);
  return out;
}

QuadratureResult A_hat_detailed(const Shape& shape, std::span<const Momentum> ks, const QuadratureOptions& options) {
  check_edges(shape, ks.size(), "A_hat");
  const auto dims = ks.size();
  std::vector<double> kappa;
  for (const auto& k : ks) kappa.push_back(norm2(k) / 2);

  // Polar split t = T w with T = sum t on [0, kRadius] and w on the simplex,
  // the simplex reached from the cube by stick breaking. The integrand is
  // then entire in every variable.
  constexpr double kRadius = 12.0;
  constexpr int kRadialFactor = 4;
  auto integrate = [&](int nodes) {
    const auto inner = gauss_legendre(nodes);
    const auto outer = gauss_legendre(kRadialFactor * nodes);
    double acc = 0;
    for (std::size_t r = 0; r < outer.nodes.size(); ++r) {
      const double T = kRadius * outer.nodes[r];
      const double radial = kRadius * outer.weights[r] * std::pow(T, static_cast<double>(dims)) * std::exp(-T * T / 2);
      // Stick breaking: w_j = rest * v_j, rest *= (1 - v_j); the last edge gets rest.
      std::function<double(std::size_t, double)> simplex = [&](std::size_t axis, double rest) -> double {
        if (axis + 1 == dims) return std::exp(-kappa[axis] * T * rest);
        double sum = 0;
        for (std::size_t i = 0; i < inner.nodes.size(); ++i) {
          const double v = inner.nodes[i];
          sum += inner.weights[i] * rest * std::exp(-kappa[axis] * T * rest * v) * simplex(axis + 1, rest * (1 - v));
        }
        return sum;
      };
      acc += radial * simplex(0, 1.0);
    }
    return acc;
  };

  QuadratureResult result;
  double previous = std::numeric_limits<double>::quiet_NaN();
  for (int nodes = 8;; nodes *= 2) {
    const double evals = kRadialFactor * std::pow(static_cast<double>(nodes), static_cast<double>(dims));
    if (static_cast<double>(result.evaluations) + evals > static_cast<double>(options.max_evaluations))
      throw QuadratureError("A_hat: evaluation budget exhausted before reaching tolerance; achieved " +
                                std::to_string(result.error_estimate),
                            result.error_estimate);
    const double value = integrate(nodes);
    result.evaluations += static_cast<std::uint64_t>(evals);
    result.nodes_per_axis = nodes;
    if (!std::isnan(previous)) {
      result.error_estimate = std::fabs(value - previous);
      result.value = value;
      if (result.error_estimate <= options.abs_tolerance) return result;
    } else {
      result.error_estimate = std::numeric_limits<double>::infinity();
      result.value = value;
    }
    previous = value;
  }
}

double A_hat(const Shape& shape, std::span<const Momentum> ks, const QuadratureOptions& options) {
  return A_hat_detailed(shape, ks, options).value;
}

double A_hat_at_zero_closed_form(int m) {
  if (m < 2) throw ArgumentError("A_hat_at_zero_closed_form: m >= 2");
  const double edges = 2.0 * m - 3;
  // int_0^inf T^M e^{-T^2/2} dT = 2^{(M-1)/2} Gamma((M+1)/2)
  return std::exp((edges - 1) / 2 * std::log(2.0) + std::lgamma((edges + 1) / 2) - std::lgamma(edges));
}

std::vector<Momentum> edge_momenta(const Shape& shape, std::span<const Momentum> external) {
  if (static_cast<int>(external.size()) != shape.m() - 1)
    throw ArgumentError("edge_momenta: need m-1 external momenta");
  const std::size_t d = external.empty() ? 0 : external[0].size();
  std::vector<Momentum> out;
  for (const auto& e : shape.edges()) {
    Momentum k(d, 0.0);
    const auto below = shape.labels_below(e.label);
    for (int i = 1; i < shape.m(); ++i) {
      if (!(below >> i & 1u)) continue;
      const auto& ki = external[static_cast<std::size_t>(i - 1)];
      if (ki.size() != d) throw ArgumentError("edge_momenta: momenta of different dimensions");
      for (std::size_t c = 0; c < d; ++c) k[c] += ki[c];
    }
    out.push_back(std::move(k));
  }
  return out;
}

double moment_char(std::span<const Momentum> external, const QuadratureOptions& options, int max_l) {
  const int l = static_cast<int>(external.size());
  if (l < 1) throw ArgumentError("moment_char: need at least one momentum");
  if (l > max_l) throw CapError("moment_char: l = " + std::to_string(l) + " above quadrature cap " + std::to_string(max_l));
  double sum = 0;
  for (const auto& shape : enumerate_shapes(l + 1)) sum += A_hat(shape, edge_momenta(shape, external), options);
  return sum;
}

double first_moment_density(std::span<const double> x) {
  const auto d = x.size();
  if (d < 1 || d > 3) throw ArgumentError("first_moment_density: 1 <= d <= 3");
  const double x2 = norm2(x);
  // t = s^2 removes the t^{-d/2} endpoint singularity; s = u/(1-u).
  const auto rule = gauss_legendre(400);
  double sum = 0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double u = rule.nodes[i];
    const double s = u / (1 - u);
    const double jac = 1 / ((1 - u) * (1 - u));
    const double t = s * s;
    const double integrand = 2 * s * t * std::exp(-t * t / 2 - (x2 > 0 ? x2 / (2 * t) : 0.0)) *
                             std::pow(2 * std::numbers::pi * t, -0.5 * static_cast<double>(d));
    if (std::isfinite(integrand)) sum += rule.weights[i] * jac * integrand;
  }
  return sum;
}

}  // namespace mflt
