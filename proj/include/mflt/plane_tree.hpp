#pragma once

#include <compare>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mflt/exact_weight.hpp"
#include "mflt/rng.hpp"

namespace mflt {

/// Default cap for exhaustive plane-tree enumeration (C_13 = 742900 trees).
inline constexpr int kDefaultEnumerationCap = 14;

/// Ordered rooted tree stored as its depth-first child-count
/// (Lukasiewicz) sequence. Vertex 0 is the root; vertex ids follow word order.
class PlaneTree {
 public:
  /// Throws ArgumentError unless `child_counts` is a valid Lukasiewicz word.
  static PlaneTree from_child_counts(std::vector<int> child_counts);
  /// Inverse of encode(): comma-separated child counts, e.g. "2,0,0".
  static PlaneTree decode(std::string_view text);

  const std::vector<int>& child_counts() const { return counts_; }
  int size() const { return static_cast<int>(counts_.size()); }
  int child_count(int v) const { return counts_[static_cast<std::size_t>(v)]; }

  /// parent[v], with -1 for the root.
  std::vector<int> parents() const;
  /// Graph distance to the root.
  std::vector<int> depths() const;
  /// children[v] in plane order.
  std::vector<std::vector<int>> children() const;
  /// Word coding: root is {0}, its j-th child {0, j}, and so on.
  std::vector<std::vector<int>> words() const;

  std::string encode() const;

  auto operator<=>(const PlaneTree&) const = default;

 private:
  explicit PlaneTree(std::vector<int> counts) : counts_(std::move(counts)) {}
  std::vector<int> counts_;
};

bool is_lukasiewicz(std::span<const int> child_counts);

/// Every plane tree with n vertices, each once, in lexicographic order of
/// child-count sequences. Throws ArgumentError for n < 1 or n > cap.
std::vector<PlaneTree> enumerate_plane_trees(int n, int cap = kDefaultEnumerationCap);

/// Catalan number C_k.
BigInt catalan(int k);

/// Offspring law p_m. Poisson probabilities are ExactWeights 1/m! e^{-1};
/// a general law is a finite list of rationals with mean exactly 1.
class OffspringModel {
 public:
  enum class Kind { CriticalPoisson, General };

  static OffspringModel critical_poisson() { return OffspringModel(Kind::CriticalPoisson, {}); }
  /// p[m] = P(xi = m). Throws ArgumentError unless the p_m are nonnegative,
  /// sum to 1 and have mean exactly 1.
  static OffspringModel general(std::vector<Rational> p);

  Kind kind() const { return kind_; }
  /// Largest degree with a defined probability; -1 when unbounded.
  int max_degree() const { return kind_ == Kind::General ? static_cast<int>(p_.size()) - 1 : -1; }
  /// p_m. Throws DomainError beyond the truncation of a general law.
  ExactWeight probability(int m) const;

 private:
  OffspringModel(Kind kind, std::vector<Rational> p) : kind_(kind), p_(std::move(p)) {}
  Kind kind_;
  std::vector<Rational> p_;
};

/// P(T) = prod_i p_{xi_i}.
ExactWeight tree_probability(const PlaneTree& tree,
                             const OffspringModel& model = OffspringModel::critical_poisson());

/// P(|T| = n) by summing tree_probability over all plane trees of size n.
ExactWeight size_probability_enumerated(int n, int cap = kDefaultEnumerationCap);
/// P(|T| = n) = n^{n-1}/n! e^{-n}.
ExactWeight size_probability_closed(int n);

/// Critical Poisson Galton-Watson plane tree conditioned on n vertices:
/// multinomial split of n-1 children over n vertices, then the cyclic
/// rotation that makes the word a valid Lukasiewicz path.
PlaneTree sample_conditioned_tree(int n, Rng& rng);

}  // namespace mflt
