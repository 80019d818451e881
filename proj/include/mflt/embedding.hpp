#pragma once

#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "mflt/exact_weight.hpp"
#include "mflt/lattice.hpp"
#include "mflt/plane_tree.hpp"
#include "mflt/rng.hpp"

namespace mflt {

/// Image of each tree vertex (word order) in Z^d.
struct Embedding {
  int dim = 1;
  std::vector<Site> positions;
};

/// Root at the origin and every parent/child pair one lattice step apart.
bool is_consistent(const PlaneTree& tree, const Embedding& phi);

/// Calls `visit` once for each of the (2d)^{n-1} embeddings of `tree`.
void for_each_embedding(const PlaneTree& tree, int d,
                        const std::function<void(const Embedding&)>& visit);

/// P(T, phi) = (2d)^{-(|T|-1)} P(T). Throws ArgumentError when phi does not
/// embed T.
ExactWeight configuration_probability(const PlaneTree& tree, const Embedding& phi);

/// x -> t_n^{(2)}(x): sum over trees of size n and vertices i of
/// P(T) P(phi(i) = x), the latter the |i|-step walk law.
LatticeDistribution two_point_coefficient_exact(int n, int d, int cap = kDefaultEnumerationCap);
/// Same, split by backbone length: entry s holds the vertices with |i| = s.
std::vector<LatticeDistribution> two_point_coefficient_by_depth(int n, int d,
                                                                int cap = kDefaultEnumerationCap);

/// s_n^{(l+1)}(x_1..x_l) with l = targets.size(), by a per-tree dynamic
/// programme over marked-subset tables (no embedding listing).
ExactWeight moment_sum_exact(int n, int d, std::span<const Site> targets,
                             int cap = kDefaultEnumerationCap);
/// The per-tree factor E_phi[prod_j N_phi(x_j)], N_phi(x) = #{i : phi(i) = x}.
Rational marked_occupation_moment(const PlaneTree& tree, int d, std::span<const Site> targets);

/// Empirical measure mu(T, phi): mass (#{i: phi(i) = x})/n at x d^{1/2} n^{-1/4}.
class PointMeasure {
 public:
  PointMeasure(int dim, int n, std::map<Site, Rational> masses);

  int dim() const { return dim_; }
  int tree_size() const { return n_; }
  double scale() const;
  const std::map<Site, Rational>& lattice_masses() const { return masses_; }
  std::vector<double> location(const Site& x) const;
  Rational total_mass() const;

 private:
  int dim_;
  int n_;
  std::map<Site, Rational> masses_;
};

PointMeasure empirical_ise_measure(const PlaneTree& tree, const Embedding& phi);

/// Tree from sample_conditioned_tree, then independent uniform steps per edge.
std::pair<PlaneTree, Embedding> sample_embedded_tree(int n, int d, Rng& rng);

}  // namespace mflt
