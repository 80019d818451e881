#include "mflt/embedding.hpp"

#include <cmath>

#include "mflt/errors.hpp"

namespace mflt {

bool is_consistent(const PlaneTree& tree, const Embedding& phi) {
  if (phi.dim < 1 || static_cast<int>(phi.positions.size()) != tree.size()) return false;
  for (const auto& x : phi.positions)
    if (static_cast<int>(x.size()) != phi.dim) return false;
  if (phi.positions[0] != origin(phi.dim)) return false;
  const auto parent = tree.parents();
  for (std::size_t v = 1; v < parent.size(); ++v)
    if (l1_norm(phi.positions[v] - phi.positions[static_cast<std::size_t>(parent[v])]) != 1) return false;
  return true;
}

void for_each_embedding(const PlaneTree& tree, int d,
                        const std::function<void(const Embedding&)>& visit) {
  if (d < 1) throw ArgumentError("for_each_embedding: dimension must be positive");
  const auto parent = tree.parents();
  const auto steps = unit_steps(d);
  Embedding phi{d, std::vector<Site>(static_cast<std::size_t>(tree.size()), origin(d))};
  // Vertex ids are in word order, so every parent precedes its children.
  std::function<void(std::size_t)> place = [&](std::size_t v) {
    if (v == phi.positions.size()) {
      visit(phi);
      return;
    }
    for (const auto& e : steps) {
      phi.positions[v] = phi.positions[static_cast<std::size_t>(parent[v])] + e;
      place(v + 1);
    }
  };
  place(1);
}

ExactWeight configuration_probability(const PlaneTree& tree, const Embedding& phi) {
  if (!is_consistent(tree, phi)) throw ArgumentError("configuration_probability: embedding does not match tree");
  ExactWeight w = tree_probability(tree);
  w *= Rational(BigInt(1), power(BigInt(2 * phi.dim), static_cast<unsigned>(tree.size() - 1)));
  return w;
}

namespace {

// Sum over trees of P(T) * #{i : |i| = s}, indexed by s.
std::vector<Rational> weighted_depth_profile(int n, int cap) {
  std::vector<Rational> profile(static_cast<std::size_t>(n), Rational(0));
  for (const auto& tree : enumerate_plane_trees(n, cap)) {
    const Rational p = tree_probability(tree).coeff();
    for (int depth : tree.depths()) profile[static_cast<std::size_t>(depth)] += p;
  }
  return profile;
}

}  // namespace

std::vector<LatticeDistribution> two_point_coefficient_by_depth(int n, int d, int cap) {
  const auto profile = weighted_depth_profile(n, cap);
  const auto walks = walk_distributions(n - 1, d);
  std::vector<LatticeDistribution> out;
  for (int s = 0; s < n; ++s) {
    LatticeDistribution layer(d);
    const auto& h = profile[static_cast<std::size_t>(s)];
    if (h != 0)
      for (const auto& [x, p] : walks[static_cast<std::size_t>(s)]) layer.add(x, ExactWeight(h * p, n));
    out.push_back(std::move(layer));
  }
  return out;
}

LatticeDistribution two_point_coefficient_exact(int n, int d, int cap) {
  LatticeDistribution total(d);
  for (const auto& layer : two_point_coefficient_by_depth(n, d, cap))
    for (const auto& [x, w] : layer.support()) total.add(x, w);
  return total;
}

namespace {

// Function of the absolute position of a vertex, sparse.
using SiteFn = std::map<Site, Rational>;

SiteFn multiply(const SiteFn& a, const SiteFn& b) {
  SiteFn out;
  const SiteFn& small = a.size() <= b.size() ? a : b;
  const SiteFn& large = a.size() <= b.size() ? b : a;
  for (const auto& [x, v] : small) {
    auto it = large.find(x);
    if (it != large.end()) out.emplace(x, v * it->second);
  }
  return out;
}

void accumulate(SiteFn& into, const SiteFn& f) {
  for (const auto& [x, v] : f) {
    auto& slot = into[x];
    slot += v;
  }
}

// table[mask] for nonempty mask; the empty mask is the constant 1.
using Table = std::vector<SiteFn>;

// out(S) = sum_{A subset S} a(S \ A) b(A)
Table subset_convolve(const Table& a, const Table& b) {
  const std::size_t full = a.size();
  Table out(full);
  for (std::size_t s = 1; s < full; ++s) {
    SiteFn acc;
    for (std::size_t sub = s;; sub = (sub - 1) & s) {
      const std::size_t rest = s & ~sub;
      if (sub == 0)
        accumulate(acc, a[rest]);
      else if (rest == 0)
        accumulate(acc, b[sub]);
      else
        accumulate(acc, multiply(a[rest], b[sub]));
      if (sub == 0) break;
    }
    out[s] = std::move(acc);
  }
  return out;
}

}  // namespace

Rational marked_occupation_moment(const PlaneTree& tree, int d, std::span<const Site> targets) {
  const auto l = targets.size();
  if (l == 0 || l > 16) throw ArgumentError("moment sum: need 1..16 target sites");
  for (const auto& x : targets)
    if (static_cast<int>(x.size()) != d) throw ArgumentError("moment sum: target dimension mismatch");
  const std::size_t full = std::size_t{1} << l;
  const auto steps = unit_steps(d);
  const Rational step_p(1, 2 * d);

  // Marks placed on a vertex itself: all targets of the mask must coincide.
  Table self(full);
  for (std::size_t mask = 1; mask < full; ++mask) {
    const Site* common = nullptr;
    bool ok = true;
    for (std::size_t j = 0; j < l && ok; ++j) {
      if (!(mask >> j & 1)) continue;
      if (common == nullptr)
        common = &targets[j];
      else
        ok = *common == targets[j];
    }
    if (ok) self[mask].emplace(*common, Rational(1));
  }

  const auto kids = tree.children();
  std::vector<Table> tables(static_cast<std::size_t>(tree.size()));
  for (int v = tree.size() - 1; v >= 0; --v) {
    Table acc = self;
    for (int c : kids[static_cast<std::size_t>(v)]) {
      Table lifted(full);
      const Table& child = tables[static_cast<std::size_t>(c)];
      for (std::size_t mask = 1; mask < full; ++mask)
        for (const auto& [x, value] : child[mask])
          for (const auto& e : steps) lifted[mask][x - e] += value * step_p;
      acc = subset_convolve(acc, lifted);
      tables[static_cast<std::size_t>(c)].clear();
    }
    tables[static_cast<std::size_t>(v)] = std::move(acc);
  }
  const auto& root = tables[0][full - 1];
  auto it = root.find(origin(d));
  return it == root.end() ? Rational(0) : it->second;
}

ExactWeight moment_sum_exact(int n, int d, std::span<const Site> targets, int cap) {
  ExactWeight sum = ExactWeight::zero(n);
  for (const auto& tree : enumerate_plane_trees(n, cap)) {
    const Rational moment = marked_occupation_moment(tree, d, targets);
    if (moment != 0) sum += tree_probability(tree) * moment;
  }
  return sum;
}

PointMeasure::PointMeasure(int dim, int n, std::map<Site, Rational> masses)
    : dim_(dim), n_(n), masses_(std::move(masses)) {}

double PointMeasure::scale() const {
  return std::sqrt(static_cast<double>(dim_)) * std::pow(static_cast<double>(n_), -0.25);
}

std::vector<double> PointMeasure::location(const Site& x) const {
  std::vector<double> out;
  for (int c : x) out.push_back(c * scale());
  return out;
}

Rational PointMeasure::total_mass() const {
  Rational sum = 0;
  for (const auto& [x, m] : masses_) sum += m;
  return sum;
}

PointMeasure empirical_ise_measure(const PlaneTree& tree, const Embedding& phi) {
  if (!is_consistent(tree, phi)) throw ArgumentError("empirical_ise_measure: embedding does not match tree");
  std::map<Site, Rational> masses;
  const Rational unit(1, tree.size());
  for (const auto& x : phi.positions) masses[x] += unit;
  return PointMeasure(phi.dim, tree.size(), std::move(masses));
}

std::pair<PlaneTree, Embedding> sample_embedded_tree(int n, int d, Rng& rng) {
  if (d < 1) throw ArgumentError("sample_embedded_tree: dimension must be positive");
  PlaneTree tree = sample_conditioned_tree(n, rng);
  const auto parent = tree.parents();
  Embedding phi{d, std::vector<Site>(static_cast<std::size_t>(n), origin(d))};
  for (std::size_t v = 1; v < parent.size(); ++v) {
    const auto dir = rng.below(static_cast<std::uint64_t>(2 * d));
    phi.positions[v] = phi.positions[static_cast<std::size_t>(parent[v])];
    phi.positions[v][dir / 2] += (dir % 2 == 0) ? 1 : -1;
  }
  return {std::move(tree), std::move(phi)};
}

}  // namespace mflt
