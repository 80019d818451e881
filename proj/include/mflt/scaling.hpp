#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mflt/exact_weight.hpp"
#include "mflt/genfun.hpp"
#include "mflt/ise.hpp"
#include "mflt/lattice.hpp"

namespace mflt {

struct RatioRow {
  long n = 0;
  double observed = 0;
  double predicted = 0;
  double ratio = 0;
};

struct RatioReport {
  std::vector<RatioRow> rows;
  /// max |ratio - 1| over the rows.
  double max_deviation = 0;
};

/// P(|T| = n) against (2 pi)^{-1/2} n^{-3/2}.
RatioReport stirling_check(std::span<const long> ns);

/// hat t_n^{(2)}(k d^{1/2} n^{-1/4}) against (2 pi)^{-1/2} n^{-1/2} hat A^{(2)}(k).
/// The dimension is k.size().
RatioReport lemma41_check(const Momentum& k, std::span<const long> ns, const QuadratureOptions& options = {});

/// Fixed backbone length s = floor(u n^{1/2}): hat t_n^{(2)}(k d^{1/2} n^{-1/4}, s)
/// against (2 pi)^{-1/2} n^{-1} u e^{-u^2/2} e^{-|k|^2 u/2}. Requires u > 0.
RatioReport lemma42_check(const Momentum& k, double u, std::span<const long> ns);

struct MonteCarloOptions {
  int n = 0;
  long samples = 0;
  std::uint64_t seed = 0;
  int threads = 1;
  /// Batches for the batch-means error bar; batch b uses Rng::derive(seed, b).
  int batches = 100;
};

struct MomentEstimate {
  std::vector<Momentum> ks;
  double mean_re = 0;
  double mean_im = 0;
  double stderr_re = 0;
  double stderr_im = 0;
  /// hat M^{(l)}(k) from the ISE quadrature.
  double target = 0;
};

/// Empirical hat M_n^{(l)}(k) = E prod_j n^{-1} sum_i exp(i k_j . phi(i) d^{1/2} n^{-1/4})
/// for each entry of `k_sets` (all with the same l and dimension), from one
/// shared stream of size-conditioned embedded trees.
std::vector<MomentEstimate> moment_convergence_mc(const MonteCarloOptions& options,
                                                  std::span<const std::vector<Momentum>> k_sets,
                                                  const QuadratureOptions& quadrature = {});

struct DegenerateDecomposition {
  int n = 0;
  int l = 0;
  /// hat s_n^{(l+1)}: sum over (T, phi, marks).
  ExactWeight s;
  /// Part whose backbone is a full (l+1)-skeleton.
  ExactWeight u;
  /// The remainder, degenerate backbones.
  ExactWeight e;
  /// sum_sigma hat t_n(sigma): every (T, phi, marks) counted once per compatible shape.
  ExactWeight shape_sum;
  /// sum over shapes and subshapes of the coefficient formula, independent of trees.
  ExactWeight shape_sum_formula;
  /// (2l-3)!! - 1.
  long multiplicity_bound = 0;
  bool identity_holds = false;
  bool bound_holds = false;
};

/// At k = 0 by enumeration over trees and mark tuples.
DegenerateDecomposition degenerate_decomposition(int n, int l = 3);

/// The same split at fixed lattice points x_1..x_l, by enumerating embeddings.
/// shape_sum_formula is left zero here.
DegenerateDecomposition degenerate_decomposition_at(int n, int d, std::span<const Site> targets);

}  // namespace mflt
