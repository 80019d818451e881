#pragma once

#include <compare>
#include <map>
#include <optional>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "mflt/embedding.hpp"
#include "mflt/exact_weight.hpp"
#include "mflt/lattice.hpp"
#include "mflt/plane_tree.hpp"

namespace mflt {

/// Nearest-neighbour bond {a, b} with a < b.
struct Bond {
  Site a, b;
  Bond(Site x, Site y);
  auto operator<=>(const Bond&) const = default;
};

/// Finite connected acyclic set of bonds containing the origin. The empty
/// bond set is the one-site tree {0}.
class LatticeTree {
 public:
  /// Throws ArgumentError unless the bonds form a tree through the origin.
  LatticeTree(int d, std::vector<Bond> bonds);

  int dim() const { return d_; }
  const std::vector<Bond>& bonds() const { return bonds_; }
  const std::vector<Site>& sites() const { return sites_; }
  int num_sites() const { return static_cast<int>(sites_.size()); }
  bool contains(const Site& x) const;
  std::vector<Site> neighbours(const Site& x) const;
  int degree(const Site& x) const { return static_cast<int>(neighbours(x).size()); }
  /// b_0 = degree of the origin, b_x = degree - 1 elsewhere.
  int branching(const Site& x) const;

  /// Subtrees hanging off the origin, each translated so that the origin's
  /// neighbour sits at the origin.
  std::vector<LatticeTree> root_branches() const;

  auto operator<=>(const LatticeTree& o) const { return std::tie(d_, bonds_) <=> std::tie(o.d_, o.bonds_); }
  bool operator==(const LatticeTree& o) const { return d_ == o.d_ && bonds_ == o.bonds_; }

  nlohmann::json to_json() const;
  static LatticeTree from_json(const nlohmann::json& j);

 private:
  int d_;
  std::vector<Bond> bonds_;
  std::vector<Site> sites_;
};

/// Caps: d = 1 up to n = 20, d = 2 up to n = 8, d >= 3 up to n = 6.
int lattice_tree_cap(int d);

/// All n-site lattice trees containing the origin, sorted by bond list.
std::vector<LatticeTree> enumerate_lattice_trees(int n, int d);

struct IntersectionCount {
  long value = 0;
  auto operator<=>(const IntersectionCount&) const = default;
};

/// sum_x C(#{i : phi(i) = x}, 2).
IntersectionCount intersection_count(const PlaneTree& tree, const Embedding& phi);

/// Z_n^beta = e^{-n} sum_c a_c e^{-beta c}: a_c collects P(T, phi) e^{n} over
/// configurations of size n with c self-intersections.
class IntersectionPolynomial {
 public:
  IntersectionPolynomial(int n, int d, std::map<long, Rational> coefficients);

  int n() const { return n_; }
  int dim() const { return d_; }
  const std::map<long, Rational>& coefficients() const { return coefficients_; }
  /// Z_n^0 = P(|T| = n).
  ExactWeight at_zero() const;
  /// Z_n^inf: injective configurations only.
  ExactWeight at_infinity() const;
  /// Z_n^beta for beta in [0, inf].
  double evaluate(double beta) const;
  /// Z_n^beta e^{n}; avoids underflow for large n.
  double evaluate_scaled(double beta) const;

 private:
  int n_, d_;
  std::map<long, Rational> coefficients_;
};

/// Exact sum over all (T, phi) with |T| = n. Throws CapError when
/// C_{n-1} (2d)^{n-1} exceeds kConfigurationCap.
inline constexpr double kConfigurationCap = 6e7;
IntersectionPolynomial intersection_polynomial(int n, int d);

enum class BetaLimit { Zero, Infinity };
ExactWeight partition_function_exact(int n, int d, BetaLimit limit);
double partition_function(int n, int d, double beta);

/// Configurations (T, phi) with phi(T) = L, found by explicit search.
struct OntoCount {
  BigInt configurations;
  /// sum over those configurations of prod_i 1/xi_i!
  Rational inverse_factorial_sum;
};
OntoCount configurations_onto(const LatticeTree& lattice_tree);

/// Tally of every injective configuration of size n by its image tree,
/// from full enumeration of (T, phi).
std::map<LatticeTree, OntoCount> configuration_census(int n, int d);

/// nu(L) by search.
BigInt nu(const LatticeTree& lattice_tree);
/// prod_x b_x!.
BigInt nu_product(const LatticeTree& lattice_tree);
/// b_0! prod_a nu(L_a) over root branches.
BigInt nu_recursive(const LatticeTree& lattice_tree);

struct QMass {
  double value = 0;
  /// Present for beta = 0 and beta = inf.
  std::optional<Rational> exact;
};

/// sum_{(T, phi): phi(T) = L} Q_n^beta(T, phi).
QMass q_mass_of_lattice_tree(const LatticeTree& lattice_tree, double beta);

/// prod_x p_{b_x} b_x! normalised over all lattice trees with the same
/// number of sites.
Rational general_offspring_limit_weight(const LatticeTree& lattice_tree, const OffspringModel& model);

}  // namespace mflt
