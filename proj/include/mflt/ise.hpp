#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mflt/genfun.hpp"
#include "mflt/shapes.hpp"

namespace mflt {

/// Integrand of the ISE characteristic function:
/// (sum t) exp(-(sum t)^2/2) prod_j exp(-|k_j|^2 t_j/2).
double a_hat(const Shape& shape, std::span<const Momentum> ks, std::span<const double> times);

struct DensityValue {
  double value = 0;
  /// Some edge has t_j = 0; the pointwise value uses the contracted-edge
  /// convention (factor 1 when y_j = 0, 0 otherwise).
  bool degenerate = false;
};

/// (sum t) exp(-(sum t)^2/2) prod_j (2 pi t_j)^{-d/2} exp(-|y_j|^2/(2 t_j)).
DensityValue a_density(const Shape& shape, std::span<const std::vector<double>> ys, std::span<const double> times);

struct QuadratureOptions {
  double abs_tolerance = 1e-8;
  /// Cap on integrand evaluations summed over refinement levels.
  std::uint64_t max_evaluations = 400'000'000;
};

struct QuadratureResult {
  double value = 0;
  double error_estimate = 0;
  int nodes_per_axis = 0;
  std::uint64_t evaluations = 0;
};

/// hat A^{(m)}(sigma; k): integral of a_hat over [0, inf)^{2m-3}. Written as
/// T = sum t on [0, 12] times the simplex of directions, with tensor
/// Gauss-Legendre on both; the rule doubles until successive estimates agree.
/// Throws QuadratureError past the evaluation budget.
QuadratureResult A_hat_detailed(const Shape& shape, std::span<const Momentum> ks,
                                const QuadratureOptions& options = {});
double A_hat(const Shape& shape, std::span<const Momentum> ks, const QuadratureOptions& options = {});

/// hat A^{(m)}(sigma; 0) from the simplex reduction
/// int_0^inf T^{2m-3} e^{-T^2/2} dT / (2m-4)!, equal to 1/(2m-5)!!.
double A_hat_at_zero_closed_form(int m);

/// Edge momenta of `shape` for external momenta k_1..k_{m-1}: edge j carries
/// the sum of k_i over labels i >= 1 below it.
std::vector<Momentum> edge_momenta(const Shape& shape, std::span<const Momentum> external);

/// hat M^{(l)}(k_1..k_l): sum over (l+1)-shapes of hat A with induced edge
/// momenta. Throws CapError for l > max_l.
double moment_char(std::span<const Momentum> external, const QuadratureOptions& options = {}, int max_l = 3);

/// Density of the first ISE moment measure, int_0^inf t e^{-t^2/2} (2 pi t)^{-d/2}
/// e^{-|x|^2/(2t)} dt, for d <= 3.
double first_moment_density(std::span<const double> x);

}  // namespace mflt
