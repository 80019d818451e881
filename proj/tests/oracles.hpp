#pragma once

// Brute-force references shared by the unit tests and the acceptance suite.
// Nothing here goes through the closed forms under test.

#include <map>
#include <vector>

#include "mflt/embedding.hpp"
#include "mflt/exact_weight.hpp"
#include "mflt/lattice.hpp"
#include "mflt/plane_tree.hpp"
#include "mflt/shapes.hpp"

namespace oracle {

using mflt::BigInt;
using mflt::ExactWeight;
using mflt::Rational;
using mflt::Site;

inline Rational embed_factor(int n, int d) {
  return Rational(BigInt(1), mflt::power(BigInt(2 * d), static_cast<unsigned>(n - 1)));
}

// t_n^{(2)}(x) = sum over (T, phi, i) of P(T, phi) [phi(i) = x].
inline std::map<Site, ExactWeight> two_point(int n, int d) {
  std::map<Site, ExactWeight> out;
  for (const auto& tree : mflt::enumerate_plane_trees(n)) {
    mflt::for_each_embedding(tree, d, [&](const mflt::Embedding& phi) {
      const ExactWeight w = mflt::configuration_probability(tree, phi);
      for (const auto& x : phi.positions) {
        auto it = out.find(x);
        if (it == out.end()) out.emplace(x, w);
        else it->second += w;
      }
    });
  }
  return out;
}

struct LabelKey {
  std::vector<int> lengths;
  std::vector<Site> displacements;
  auto operator<=>(const LabelKey&) const = default;
};

// t_n(sigma; y, s) by checking compatibility of every (T, phi, marks).
inline std::map<LabelKey, ExactWeight> mpoint(int n, int d, const mflt::Shape& shape) {
  std::map<LabelKey, ExactWeight> out;
  const int l = shape.m() - 1;
  for (const auto& tree : mflt::enumerate_plane_trees(n)) {
    mflt::for_each_embedding(tree, d, [&](const mflt::Embedding& phi) {
      const ExactWeight w = mflt::configuration_probability(tree, phi);
      std::vector<int> marks(static_cast<std::size_t>(l), 0);
      while (true) {
        for (const auto& label : mflt::compatible_labels(tree, phi, marks, shape)) {
          LabelKey key{label.lengths, label.displacements};
          auto it = out.find(key);
          if (it == out.end()) out.emplace(key, w);
          else it->second += w;
        }
        std::size_t j = 0;
        while (j < marks.size() && ++marks[j] == n) marks[j++] = 0;
        if (j == marks.size()) break;
      }
    });
  }
  return out;
}

// P(|T| = n) e^{n} by the root-degree recursion over subtree sizes.
inline std::vector<Rational> size_law_by_recursion(int n_max) {
  // forest[k][s]: sum over ordered k-tuples of trees of total size s.
  std::vector<Rational> tree(static_cast<std::size_t>(n_max + 1), 0);
  std::vector<std::vector<Rational>> forest(static_cast<std::size_t>(n_max + 1),
                                            std::vector<Rational>(static_cast<std::size_t>(n_max + 1), 0));
  forest[0][0] = 1;
  for (int s = 1; s <= n_max; ++s) {
    Rational sum = 0;
    for (int k = 0; k < s; ++k) sum += forest[static_cast<std::size_t>(k)][static_cast<std::size_t>(s - 1)] / Rational(mflt::factorial(static_cast<unsigned>(k)));
    tree[static_cast<std::size_t>(s)] = sum;
    for (int k = 1; k <= n_max; ++k) {
      Rational f = 0;
      for (int first = 1; first <= s; ++first)
        f += tree[static_cast<std::size_t>(first)] * forest[static_cast<std::size_t>(k - 1)][static_cast<std::size_t>(s - first)];
      forest[static_cast<std::size_t>(k)][static_cast<std::size_t>(s)] = f;
    }
  }
  return tree;
}

// Coefficients of T(w)^p where T = w e^T, by exact power-series iteration.
// [z^n] t^p = [w^n] T^p e^{-n} with w = z/e.
inline std::vector<std::vector<Rational>> tree_function_powers(int order, int p_max) {
  const auto size = static_cast<std::size_t>(order + 1);
  auto multiply = [&](const std::vector<Rational>& a, const std::vector<Rational>& b) {
    std::vector<Rational> c(size, 0);
    for (std::size_t i = 0; i < size; ++i)
      if (a[i] != 0)
        for (std::size_t j = 0; i + j < size; ++j) c[i + j] += a[i] * b[j];
    return c;
  };
  auto exponential = [&](const std::vector<Rational>& a) {
    std::vector<Rational> result(size, 0), term(size, 0);
    result[0] = term[0] = 1;
    for (int k = 1; k <= order; ++k) {
      term = multiply(term, a);
      for (auto& c : term) c /= k;
      for (std::size_t i = 0; i < size; ++i) result[i] += term[i];
    }
    return result;
  };
  std::vector<Rational> t(size, 0);
  for (int iter = 0; iter <= order; ++iter) {
    const auto e = exponential(t);
    std::vector<Rational> next(size, 0);
    for (std::size_t i = 0; i + 1 < size; ++i) next[i + 1] = e[i];
    t = next;
  }
  std::vector<std::vector<Rational>> powers{std::vector<Rational>(size, 0)};
  powers[0][0] = 1;
  for (int p = 1; p <= p_max; ++p) powers.push_back(multiply(powers.back(), t));
  return powers;
}

}  // namespace oracle
