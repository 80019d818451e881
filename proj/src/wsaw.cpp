#include "mflt/wsaw.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>
#include <set>
#include <tuple>

#include "mflt/errors.hpp"

namespace mflt {

Bond::Bond(Site x, Site y) {
  if (x.size() != y.size() || l1_norm(x - y) != 1) throw ArgumentError("bond endpoints must be nearest neighbours");
  if (y < x) std::swap(x, y);
  a = std::move(x);
  b = std::move(y);
}

LatticeTree::LatticeTree(int d, std::vector<Bond> bonds) : d_(d), bonds_(std::move(bonds)) {
  if (d_ < 1) throw ArgumentError("lattice tree: dimension must be positive");
  std::sort(bonds_.begin(), bonds_.end());
  if (std::adjacent_find(bonds_.begin(), bonds_.end()) != bonds_.end()) throw ArgumentError("lattice tree: repeated bond");
  std::set<Site> sites;
  sites.insert(origin(d_));
  for (const auto& bond : bonds_) {
    if (static_cast<int>(bond.a.size()) != d_) throw ArgumentError("lattice tree: bond dimension mismatch");
    sites.insert(bond.a);
    sites.insert(bond.b);
  }
  sites_.assign(sites.begin(), sites.end());
  if (sites_.size() != bonds_.size() + 1) throw ArgumentError("lattice tree: bonds must form a tree through the origin");
  // |sites| = |bonds| + 1, so connected <=> acyclic.
  std::set<Site> seen{origin(d_)};
  std::queue<Site> frontier;
  frontier.push(origin(d_));
  while (!frontier.empty()) {
    const Site x = frontier.front();
    frontier.pop();
    for (const auto& y : neighbours(x))
      if (seen.insert(y).second) frontier.push(y);
  }
  if (seen.size() != sites_.size()) throw ArgumentError("lattice tree: bonds are not connected");
}

bool LatticeTree::contains(const Site& x) const { return std::binary_search(sites_.begin(), sites_.end(), x); }

std::vector<Site> LatticeTree::neighbours(const Site& x) const {
  std::vector<Site> out;
  for (const auto& bond : bonds_) {
    if (bond.a == x) out.push_back(bond.b);
    if (bond.b == x) out.push_back(bond.a);
  }
  return out;
}

int LatticeTree::branching(const Site& x) const {
  if (!contains(x)) throw ArgumentError("branching: site not in lattice tree");
  const int deg = degree(x);
  return x == origin(d_) ? deg : deg - 1;
}

std::vector<LatticeTree> LatticeTree::root_branches() const {
  const Site zero = origin(d_);
  std::vector<LatticeTree> out;
  for (const auto& start : neighbours(zero)) {
    std::set<Site> component{start};
    std::queue<Site> frontier;
    frontier.push(start);
    while (!frontier.empty()) {
      const Site x = frontier.front();
      frontier.pop();
      for (const auto& y : neighbours(x))
        if (y != zero && component.insert(y).second) frontier.push(y);
    }
    std::vector<Bond> bonds;
    for (const auto& bond : bonds_)
      if (component.count(bond.a) && component.count(bond.b)) bonds.emplace_back(bond.a - start, bond.b - start);
    out.emplace_back(d_, std::move(bonds));
  }
  return out;
}

nlohmann::json LatticeTree::to_json() const {
  auto bonds = nlohmann::json::array();
  for (const auto& bond : bonds_) bonds.push_back({bond.a, bond.b});
  return {{"d", d_}, {"bonds", bonds}};
}

LatticeTree LatticeTree::from_json(const nlohmann::json& j) {
  std::vector<Bond> bonds;
  for (const auto& pair : j.at("bonds")) bonds.emplace_back(pair.at(0).get<Site>(), pair.at(1).get<Site>());
  return LatticeTree(j.at("d").get<int>(), std::move(bonds));
}

int lattice_tree_cap(int d) { return d == 1 ? 20 : d == 2 ? 8 : 6; }

namespace {

// Sites packed into 6-bit biased coordinates; valid while |x_i| <= 31.
constexpr int kBits = 6;
constexpr std::uint64_t kBias = 32;

std::uint64_t pack(const Site& x) {
  std::uint64_t key = 0;
  for (std::size_t i = 0; i < x.size(); ++i) key |= (static_cast<std::uint64_t>(x[i]) + kBias) << (kBits * i);
  return key;
}

Site unpack(std::uint64_t key, int d) {
  Site x(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i)
    x[static_cast<std::size_t>(i)] = static_cast<int>((key >> (kBits * i)) & ((1u << kBits) - 1)) - static_cast<int>(kBias);
  return x;
}

std::uint64_t pack_bond(std::uint64_t x, std::uint64_t y) {
  if (y < x) std::swap(x, y);
  return (x << 32) | y;
}

LatticeTree unpack_tree(const std::vector<std::uint64_t>& bonds, int d) {
  std::vector<Bond> out;
  for (auto key : bonds) out.emplace_back(unpack(key >> 32, d), unpack(key & 0xffffffffu, d));
  return LatticeTree(d, std::move(out));
}

void check_size(int n, int d) {
  if (n < 1 || d < 1) throw ArgumentError("lattice trees: n and d must be positive");
  if (n > lattice_tree_cap(d) || d > 5)
    throw CapError("lattice trees: n = " + std::to_string(n) + " above cap " + std::to_string(lattice_tree_cap(d)) +
                   " for d = " + std::to_string(d));
}

}  // namespace

std::vector<LatticeTree> enumerate_lattice_trees(int n, int d) {
  check_size(n, d);
  std::vector<std::uint64_t> strides;
  for (int i = 0; i < d; ++i) strides.push_back(std::uint64_t{1} << (kBits * i));
  const std::uint64_t zero = pack(origin(d));

  std::set<std::vector<std::uint64_t>> level{{}};
  for (int size = 1; size < n; ++size) {
    std::set<std::vector<std::uint64_t>> next;
    for (const auto& bonds : level) {
      std::set<std::uint64_t> sites{zero};
      for (auto b : bonds) {
        sites.insert(b >> 32);
        sites.insert(b & 0xffffffffu);
      }
      for (auto x : sites)
        for (auto stride : strides)
          for (auto y : {x + stride, x - stride}) {
            if (sites.count(y)) continue;
            auto grown = bonds;
            grown.insert(std::upper_bound(grown.begin(), grown.end(), pack_bond(x, y)), pack_bond(x, y));
            next.insert(std::move(grown));
          }
    }
    level = std::move(next);
  }
  std::vector<LatticeTree> out;
  for (const auto& bonds : level) out.push_back(unpack_tree(bonds, d));
  std::sort(out.begin(), out.end());
  return out;
}

IntersectionCount intersection_count(const PlaneTree& tree, const Embedding& phi) {
  if (!is_consistent(tree, phi)) throw ArgumentError("intersection_count: embedding does not match tree");
  std::map<Site, long> multiplicity;
  for (const auto& x : phi.positions) ++multiplicity[x];
  IntersectionCount c;
  for (const auto& [x, k] : multiplicity) c.value += k * (k - 1) / 2;
  return c;
}

namespace {

void check_configuration_cap(int n, int d) {
  if (n < 1 || d < 1) throw ArgumentError("configurations: n and d must be positive");
  const double count = catalan(n - 1).get_d() * std::pow(2.0 * d, n - 1);
  if (count > kConfigurationCap)
    throw CapError("configurations: C_{n-1}(2d)^{n-1} = " + std::to_string(count) + " exceeds cap " +
                   std::to_string(kConfigurationCap));
}

// Walks every embedding of `tree` on a flat box of side 2n+1, calling
// leaf(intersections, positions) at each complete embedding. With
// injective_only, branches that revisit a site are pruned.
void walk_embeddings(const PlaneTree& tree, int d, bool injective_only,
                     const std::function<void(long, const std::vector<std::size_t>&)>& leaf) {
  const int n = tree.size();
  const auto side = static_cast<std::size_t>(2 * n + 1);
  std::vector<std::ptrdiff_t> strides;
  std::size_t volume = 1;
  for (int i = 0; i < d; ++i) {
    strides.push_back(static_cast<std::ptrdiff_t>(volume));
    volume *= side;
  }
  std::size_t centre = 0;
  for (int i = 0; i < d; ++i) centre += static_cast<std::size_t>(n) * static_cast<std::size_t>(strides[static_cast<std::size_t>(i)]);

  const auto parent = tree.parents();
  std::vector<int> occupancy(volume, 0);
  std::vector<std::size_t> pos(static_cast<std::size_t>(n), centre);
  occupancy[centre] = 1;
  std::function<void(std::size_t, long)> place = [&](std::size_t v, long intersections) {
    if (v == pos.size()) {
      leaf(intersections, pos);
      return;
    }
    const std::size_t from = pos[static_cast<std::size_t>(parent[v])];
    for (auto stride : strides)
      for (auto step : {stride, -stride}) {
        const auto at = static_cast<std::size_t>(static_cast<std::ptrdiff_t>(from) + step);
        if (injective_only && occupancy[at] > 0) continue;
        pos[v] = at;
        const long added = occupancy[at]++;
        place(v + 1, intersections + added);
        --occupancy[at];
      }
  };
  place(1, 0);
}

}  // namespace

IntersectionPolynomial::IntersectionPolynomial(int n, int d, std::map<long, Rational> coefficients)
    : n_(n), d_(d), coefficients_(std::move(coefficients)) {}

ExactWeight IntersectionPolynomial::at_zero() const {
  Rational sum = 0;
  for (const auto& [c, a] : coefficients_) sum += a;
  return ExactWeight(sum, n_);
}

ExactWeight IntersectionPolynomial::at_infinity() const {
  auto it = coefficients_.find(0);
  return ExactWeight(it == coefficients_.end() ? Rational(0) : it->second, n_);
}

double IntersectionPolynomial::evaluate_scaled(double beta) const {
  if (!(beta >= 0)) throw ArgumentError("partition function: beta must be nonnegative");
  if (std::isinf(beta)) return at_infinity().coeff().get_d();
  double sum = 0;
  for (const auto& [c, a] : coefficients_) sum += a.get_d() * std::exp(-beta * static_cast<double>(c));
  return sum;
}

double IntersectionPolynomial::evaluate(double beta) const { return evaluate_scaled(beta) * std::exp(-static_cast<double>(n_)); }

IntersectionPolynomial intersection_polynomial(int n, int d) {
  check_configuration_cap(n, d);
  std::map<long, Rational> coefficients;
  const Rational embed(BigInt(1), power(BigInt(2 * d), static_cast<unsigned>(n - 1)));
  for (const auto& tree : enumerate_plane_trees(n, n)) {
    std::vector<std::uint64_t> histogram(static_cast<std::size_t>(n * (n - 1) / 2 + 1), 0);
    walk_embeddings(tree, d, false, [&](long c, const std::vector<std::size_t>&) { ++histogram[static_cast<std::size_t>(c)]; });
    const Rational weight = tree_probability(tree).coeff() * embed;
    for (std::size_t c = 0; c < histogram.size(); ++c)
      if (histogram[c]) coefficients[static_cast<long>(c)] += weight * Rational(BigInt(static_cast<unsigned long>(histogram[c])));
  }
  return IntersectionPolynomial(n, d, std::move(coefficients));
}

ExactWeight partition_function_exact(int n, int d, BetaLimit limit) {
  const auto poly = intersection_polynomial(n, d);
  return limit == BetaLimit::Zero ? poly.at_zero() : poly.at_infinity();
}

double partition_function(int n, int d, double beta) { return intersection_polynomial(n, d).evaluate(beta); }

OntoCount configurations_onto(const LatticeTree& lattice_tree) {
  const auto& sites = lattice_tree.sites();
  const auto count = sites.size();
  std::vector<std::vector<std::size_t>> adjacent(count);
  auto index = [&](const Site& x) {
    return static_cast<std::size_t>(std::lower_bound(sites.begin(), sites.end(), x) - sites.begin());
  };
  for (const auto& bond : lattice_tree.bonds()) {
    adjacent[index(bond.a)].push_back(index(bond.b));
    adjacent[index(bond.b)].push_back(index(bond.a));
  }

  OntoCount result{0, 0};
  std::vector<char> visited(count, 0);
  visited[index(origin(lattice_tree.dim()))] = 1;
  std::vector<std::size_t> pending{index(origin(lattice_tree.dim()))};

  // Build (T, phi) in word order: pop the next vertex, give it an ordered
  // list of children on unvisited neighbouring sites.
  std::function<void(std::size_t, BigInt)> expand = [&](std::size_t placed, BigInt factorials) {
    if (pending.empty()) {
      if (placed == count) {
        ++result.configurations;
        result.inverse_factorial_sum += Rational(BigInt(1), factorials);
      }
      return;
    }
    const std::size_t x = pending.back();
    pending.pop_back();
    std::vector<std::size_t> free;
    for (auto y : adjacent[x])
      if (!visited[y]) free.push_back(y);

    std::vector<std::size_t> chosen;
    std::function<void()> choose = [&]() {
      // Current ordered selection is one choice of children.
      for (auto y : chosen) visited[y] = 1;
      for (auto it = chosen.rbegin(); it != chosen.rend(); ++it) pending.push_back(*it);
      expand(placed + chosen.size(), factorials * factorial(static_cast<unsigned>(chosen.size())));
      for (std::size_t k = 0; k < chosen.size(); ++k) pending.pop_back();
      for (auto y : chosen) visited[y] = 0;
      for (auto y : free) {
        if (std::find(chosen.begin(), chosen.end(), y) != chosen.end()) continue;
        chosen.push_back(y);
        choose();
        chosen.pop_back();
      }
    };
    choose();
    pending.push_back(x);
  };
  expand(1, BigInt(1));
  return result;
}

std::map<LatticeTree, OntoCount> configuration_census(int n, int d) {
  check_configuration_cap(n, d);
  check_size(n, d);
  std::map<std::vector<std::uint64_t>, OntoCount> tally;
  const int side = 2 * n + 1;
  auto to_key = [&](std::size_t flat) {
    Site x(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) {
      x[static_cast<std::size_t>(i)] = static_cast<int>(flat % static_cast<std::size_t>(side)) - n;
      flat /= static_cast<std::size_t>(side);
    }
    return pack(x);
  };
  for (const auto& tree : enumerate_plane_trees(n, n)) {
    const auto parent = tree.parents();
    BigInt factorials = 1;
    for (int c : tree.child_counts()) factorials *= factorial(static_cast<unsigned>(c));
    const Rational inverse(BigInt(1), factorials);
    walk_embeddings(tree, d, true, [&](long, const std::vector<std::size_t>& pos) {
      std::vector<std::uint64_t> bonds;
      for (std::size_t v = 1; v < pos.size(); ++v)
        bonds.push_back(pack_bond(to_key(pos[static_cast<std::size_t>(parent[v])]), to_key(pos[v])));
      std::sort(bonds.begin(), bonds.end());
      auto& entry = tally[bonds];
      ++entry.configurations;
      entry.inverse_factorial_sum += inverse;
    });
  }
  std::map<LatticeTree, OntoCount> out;
  for (auto& [bonds, count] : tally) out.emplace(unpack_tree(bonds, d), std::move(count));
  return out;
}

BigInt nu(const LatticeTree& lattice_tree) { return configurations_onto(lattice_tree).configurations; }

BigInt nu_product(const LatticeTree& lattice_tree) {
  BigInt product = 1;
  for (const auto& x : lattice_tree.sites()) product *= factorial(static_cast<unsigned>(lattice_tree.branching(x)));
  return product;
}

BigInt nu_recursive(const LatticeTree& lattice_tree) {
  const auto branches = lattice_tree.root_branches();
  BigInt product = factorial(static_cast<unsigned>(branches.size()));
  for (const auto& branch : branches) product *= nu(branch);
  return product;
}

QMass q_mass_of_lattice_tree(const LatticeTree& lattice_tree, double beta) {
  if (!(beta >= 0)) throw ArgumentError("q_mass: beta must be nonnegative");
  const int n = lattice_tree.num_sites();
  const int d = lattice_tree.dim();
  const auto poly = intersection_polynomial(n, d);
  const Rational numerator = configurations_onto(lattice_tree).inverse_factorial_sum *
                             Rational(BigInt(1), power(BigInt(2 * d), static_cast<unsigned>(n - 1)));
  QMass out;
  if (beta == 0 || std::isinf(beta)) {
    const ExactWeight z = beta == 0 ? poly.at_zero() : poly.at_infinity();
    out.exact = ratio(ExactWeight(numerator, n), z);
    out.value = out.exact->get_d();
    return out;
  }
  out.value = numerator.get_d() / poly.evaluate_scaled(beta);
  return out;
}

Rational general_offspring_limit_weight(const LatticeTree& lattice_tree, const OffspringModel& model) {
  auto weight = [&](const LatticeTree& tree) {
    ExactWeight w(Rational(1), 0);
    for (const auto& x : tree.sites()) {
      const int b = tree.branching(x);
      if (model.max_degree() >= 0 && b > model.max_degree()) return ExactWeight::zero(model.probability(0).epow() * tree.num_sites());
      w *= model.probability(b) * Rational(factorial(static_cast<unsigned>(b)));
    }
    return w;
  };
  const ExactWeight mine = weight(lattice_tree);
  ExactWeight total = ExactWeight::zero(mine.epow());
  for (const auto& other : enumerate_lattice_trees(lattice_tree.num_sites(), lattice_tree.dim())) total += weight(other);
  if (total.coeff() == 0) throw DomainError("general_offspring_limit_weight: no lattice tree has positive weight");
  return ratio(mine, total);
}

}  // namespace mflt
