#include "mflt/plane_tree.hpp"

#include <charconv>
#include <numeric>

#include "mflt/errors.hpp"

namespace mflt {

bool is_lukasiewicz(std::span<const int> child_counts) {
  if (child_counts.empty()) return false;
  long open = 1;
  for (std::size_t i = 0; i < child_counts.size(); ++i) {
    if (child_counts[i] < 0 || open <= 0) return false;
    open += child_counts[i] - 1;
  }
  return open == 0;
}

PlaneTree PlaneTree::from_child_counts(std::vector<int> child_counts) {
  if (!is_lukasiewicz(child_counts)) throw ArgumentError("not a valid child-count sequence");
  return PlaneTree(std::move(child_counts));
}

PlaneTree PlaneTree::decode(std::string_view text) {
  std::vector<int> counts;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto comma = text.find(',', pos);
    if (comma == std::string_view::npos) comma = text.size();
    int value = 0;
    auto [ptr, ec] = std::from_chars(text.data() + pos, text.data() + comma, value);
    if (ec != std::errc() || ptr != text.data() + comma)
      throw ArgumentError("malformed child-count sequence: " + std::string(text));
    counts.push_back(value);
    pos = comma + 1;
  }
  return from_child_counts(std::move(counts));
}

std::string PlaneTree::encode() const {
  std::string out;
  for (std::size_t i = 0; i < counts_.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(counts_[i]);
  }
  return out;
}

std::vector<int> PlaneTree::parents() const {
  std::vector<int> parent(counts_.size(), -1);
  // stack of (vertex, children still to attach)
  std::vector<std::pair<int, int>> open;
  for (int v = 0; v < size(); ++v) {
    while (!open.empty() && open.back().second == 0) open.pop_back();
    if (!open.empty()) {
      parent[static_cast<std::size_t>(v)] = open.back().first;
      --open.back().second;
    }
    open.emplace_back(v, counts_[static_cast<std::size_t>(v)]);
  }
  return parent;
}

std::vector<int> PlaneTree::depths() const {
  const auto parent = parents();
  std::vector<int> depth(counts_.size(), 0);
  for (std::size_t v = 1; v < depth.size(); ++v)
    depth[v] = depth[static_cast<std::size_t>(parent[v])] + 1;
  return depth;
}

std::vector<std::vector<int>> PlaneTree::children() const {
  const auto parent = parents();
  std::vector<std::vector<int>> kids(counts_.size());
  for (int v = 1; v < size(); ++v) kids[static_cast<std::size_t>(parent[static_cast<std::size_t>(v)])].push_back(v);
  return kids;
}

std::vector<std::vector<int>> PlaneTree::words() const {
  const auto kids = children();
  std::vector<std::vector<int>> word(counts_.size());
  word[0] = {0};
  for (std::size_t v = 0; v < kids.size(); ++v) {
    int j = 1;
    for (int c : kids[v]) {
      word[static_cast<std::size_t>(c)] = word[v];
      word[static_cast<std::size_t>(c)].push_back(j++);
    }
  }
  return word;
}

namespace {
void extend(int remaining, long open, std::vector<int>& prefix, std::vector<PlaneTree>& out) {
  if (remaining == 0) {
    out.push_back(PlaneTree::from_child_counts(prefix));
    return;
  }
  // After this vertex `open - 1 + c` slots remain; it must be positive until
  // the last vertex and cannot exceed the vertices left to fill them.
  const int left_after = remaining - 1;
  for (int c = 0; open - 1 + c <= left_after; ++c) {
    const long next_open = open - 1 + c;
    if (left_after > 0 && next_open == 0) continue;
    if (left_after == 0 && next_open != 0) continue;
    prefix.push_back(c);
    extend(left_after, next_open, prefix, out);
    prefix.pop_back();
  }
}
}  // namespace

std::vector<PlaneTree> enumerate_plane_trees(int n, int cap) {
  if (n < 1) throw ArgumentError("enumerate_plane_trees: n must be positive");
  if (n > cap)
    throw ArgumentError("enumerate_plane_trees: n = " + std::to_string(n) + " exceeds cap " +
                        std::to_string(cap));
  std::vector<PlaneTree> out;
  out.reserve(catalan(n - 1).get_ui());
  std::vector<int> prefix;
  prefix.reserve(static_cast<std::size_t>(n));
  extend(n, 1, prefix, out);
  return out;
}

BigInt catalan(int k) {
  BigInt binom;
  mpz_bin_uiui(binom.get_mpz_t(), static_cast<unsigned long>(2 * k), static_cast<unsigned long>(k));
  return binom / (k + 1);
}

OffspringModel OffspringModel::general(std::vector<Rational> p) {
  if (p.empty()) throw ArgumentError("offspring law: empty probability list");
  Rational total = 0, mean = 0;
  for (std::size_t m = 0; m < p.size(); ++m) {
    p[m].canonicalize();
    if (p[m] < 0) throw ArgumentError("offspring law: negative probability");
    total += p[m];
    mean += p[m] * static_cast<long>(m);
  }
  if (total != 1) throw ArgumentError("offspring law: probabilities sum to " + total.get_str());
  if (mean != 1) throw ArgumentError("offspring law is not critical: mean " + mean.get_str());
  return OffspringModel(Kind::General, std::move(p));
}

ExactWeight OffspringModel::probability(int m) const {
  if (m < 0) throw DomainError("offspring law: negative degree");
  if (kind_ == Kind::CriticalPoisson)
    return ExactWeight(Rational(BigInt(1), factorial(static_cast<unsigned>(m))), 1);
  if (m > max_degree())
    throw DomainError("offspring law: p_" + std::to_string(m) + " beyond truncation at " +
                      std::to_string(max_degree()));
  return ExactWeight(p_[static_cast<std::size_t>(m)], 0);
}

ExactWeight tree_probability(const PlaneTree& tree, const OffspringModel& model) {
  if (model.kind() == OffspringModel::Kind::CriticalPoisson) {
    BigInt den = 1;
    for (int c : tree.child_counts()) den *= factorial(static_cast<unsigned>(c));
    return ExactWeight(Rational(BigInt(1), den), tree.size());
  }
  ExactWeight w(Rational(1), 0);
  for (int c : tree.child_counts()) w *= model.probability(c);
  return w;
}

ExactWeight size_probability_enumerated(int n, int cap) {
  ExactWeight sum = ExactWeight::zero(n);
  for (const auto& t : enumerate_plane_trees(n, cap)) sum += tree_probability(t);
  return sum;
}

ExactWeight size_probability_closed(int n) {
  if (n < 1) throw ArgumentError("size_probability: n must be positive");
  const auto un = static_cast<unsigned>(n);
  return ExactWeight(Rational(power(BigInt(n), un - 1), factorial(un)), n);
}

PlaneTree sample_conditioned_tree(int n, Rng& rng) {
  if (n < 1) throw ArgumentError("sample_conditioned_tree: n must be positive");
  const auto size = static_cast<std::size_t>(n);
  std::vector<int> counts(size, 0);
  for (int ball = 0; ball < n - 1; ++ball) ++counts[rng.below(size)];

  // Cycle lemma: the walk sum(c_i - 1) ends at -1; rotating to start just
  // after its first minimum gives the unique valid rotation.
  long walk = 0, best = 0;
  std::size_t argmin = 0;
  for (std::size_t i = 0; i < size; ++i) {
    walk += counts[i] - 1;
    if (walk < best) {
      best = walk;
      argmin = i;
    }
  }
  std::vector<int> rotated(size);
  for (std::size_t i = 0; i < size; ++i) rotated[i] = counts[(argmin + 1 + i) % size];
  return PlaneTree::from_child_counts(std::move(rotated));
}

}  // namespace mflt
