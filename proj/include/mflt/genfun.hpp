#pragma once

#include <span>
#include <vector>

#include "mflt/exact_weight.hpp"
#include "mflt/lattice.hpp"
#include "mflt/shapes.hpp"

namespace mflt {

/// A point of R^d in Fourier space.
using Momentum = std::vector<double>;

/// Characteristic function of the nearest-neighbour step, (1/d) sum_j cos k_j.
/// The dimension is k.size().
double step_transform(std::span<const double> k);

/// Smallest nonnegative root of t e^{-t} = z e^{-1} for z in [0, 1], i.e.
/// -W(-z/e) on the principal branch. Throws DomainError outside [0, 1].
double one_point(double z);

/// [z^n] (t_z)^p = (p/n) n^{n-p}/(n-p)! e^{-n}; zero weight unless 1 <= p <= n.
ExactWeight coeff_tree_power(int n, int p);
/// log of the value of coeff_tree_power(n, p), evaluated in floating point;
/// -inf when the coefficient vanishes.
double log_coeff_tree_power(int n, int p);

/// t_z / (1 - t_z zeta D(k)). Throws DivergenceError where the denominator
/// is not positive, notably at (z, zeta, k) = (1, 1, 0).
double two_point_hat(double z, double zeta, std::span<const double> k);

/// t_z prod_j 1/(1 - t_z zeta_j D(k_j)) over the 2m-3 edges of `shape`.
double m_point_hat(const Shape& shape, double z, std::span<const double> zetas,
                   std::span<const Momentum> ks);

/// x-space m-point coefficient with fixed backbone lengths:
/// t_n(sigma; y, s) = [z^n] t^{1 + sum s} * prod_j P(walk of s_j steps ends at y_j).
ExactWeight mpoint_coefficient_exact(int n, std::span<const int> lengths, std::span<const Site> displacements);

/// t_n^{(2)}(x) = sum_s [z^n] t^{s+1} P(s-step walk ends at x), by Lagrange
/// inversion; independent of tree enumeration.
LatticeDistribution two_point_coefficient_lagrange(int n, int d);

/// Coefficient of z^n in t(lambda) at k = 0, zeta = 1: the part of the
/// m-point function with s_j = 0 off e(lambda) and s_j > 0 on e(lambda).
ExactWeight subshape_coefficient_at_zero(const Subshape& lambda, int n);

/// Largest n accepted by t_hat_coefficient for m >= 3.
inline constexpr int kMultiEdgeCoefficientCap = 4000;

/// hat t_n^{(m)}(sigma; k) = sum_{s} [z^n] t^{1+sum s} prod_j D(k_j)^{s_j}, summed
/// by total length with complete homogeneous polynomials. Floating point.
double t_hat_coefficient(const Shape& shape, int n, std::span<const Momentum> ks);
/// The single term with backbone lengths `lengths`.
double t_hat_coefficient_fixed_s(int n, std::span<const Momentum> ks, std::span<const int> lengths);

}  // namespace mflt
