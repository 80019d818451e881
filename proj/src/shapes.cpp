#include "mflt/shapes.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>

#include "mflt/errors.hpp"

namespace mflt {

Shape::Shape(int m, std::vector<ShapeEdge> edges) : m_(m), edges_(std::move(edges)) {
  if (m_ < 2) throw ArgumentError("shape: m must be at least 2");
  if (static_cast<int>(edges_.size()) != num_edges()) throw ArgumentError("shape: expected 2m-3 edges");
  std::vector<int> degree(static_cast<std::size_t>(num_vertices()), 0);
  std::vector<int> indegree(degree.size(), 0);
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    const auto& e = edges_[i];
    if (e.label != static_cast<int>(i) + 1) throw ArgumentError("shape: edges must be listed by label");
    if (e.from < 0 || e.to < 0 || e.from >= num_vertices() || e.to >= num_vertices() || e.from == e.to)
      throw ArgumentError("shape: edge endpoint out of range");
    ++degree[static_cast<std::size_t>(e.from)];
    ++degree[static_cast<std::size_t>(e.to)];
    ++indegree[static_cast<std::size_t>(e.to)];
  }
  for (int v = 0; v < num_vertices(); ++v) {
    const int want = is_external(v) ? 1 : 3;
    if (degree[static_cast<std::size_t>(v)] != want) throw ArgumentError("shape: wrong vertex degree");
    if (indegree[static_cast<std::size_t>(v)] != (v == 0 ? 0 : 1))
      throw ArgumentError("shape: edges must be oriented away from vertex 0");
  }
  // n-1 edges, each non-root vertex with one parent: connected iff all reach 0.
  std::vector<int> parent(degree.size(), -1);
  for (const auto& e : edges_) parent[static_cast<std::size_t>(e.to)] = e.from;
  for (int v = 1; v < num_vertices(); ++v) {
    int u = v;
    for (int steps = 0; u != 0; ++steps) {
      if (steps > num_vertices()) throw ArgumentError("shape: not a tree");
      u = parent[static_cast<std::size_t>(u)];
    }
  }
}

std::uint32_t Shape::labels_below(int label) const {
  std::uint32_t mask = 0;
  std::vector<int> stack{edge(label).to};
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    if (is_external(v)) mask |= 1u << v;
    for (const auto& e : edges_)
      if (e.from == v) stack.push_back(e.to);
  }
  return mask;
}

std::string Shape::canonical_code() const {
  std::function<std::string(int)> code = [&](int v) -> std::string {
    if (is_external(v)) return "L" + std::to_string(v);
    std::vector<std::string> parts;
    for (const auto& e : edges_)
      if (e.from == v) parts.push_back(code(e.to));
    std::sort(parts.begin(), parts.end());
    std::string out = "(";
    for (const auto& p : parts) out += p;
    return out + ")";
  };
  for (const auto& e : edges_)
    if (e.from == 0) return "L0" + code(e.to);
  return "L0";
}

nlohmann::json Shape::to_json() const {
  auto edges = nlohmann::json::array();
  for (const auto& e : edges_) edges.push_back({{"label", e.label}, {"from", e.from}, {"to", e.to}});
  return {{"m", m_}, {"edges", edges}};
}

Shape Shape::from_json(const nlohmann::json& j) {
  std::vector<ShapeEdge> edges;
  for (const auto& e : j.at("edges"))
    edges.push_back({e.at("label").get<int>(), e.at("from").get<int>(), e.at("to").get<int>()});
  return Shape(j.at("m").get<int>(), std::move(edges));
}

std::vector<Shape> enumerate_shapes(int m, int cap) {
  if (m < 2 || m > cap)
    throw ArgumentError("enumerate_shapes: m = " + std::to_string(m) + " outside [2, " + std::to_string(cap) + "]");
  if (m == 2) return {Shape(2, {{1, 0, 1}})};
  if (m == 3) return {Shape(3, {{1, 0, 3}, {2, 3, 1}, {3, 3, 2}})};
  std::vector<Shape> out;
  for (const auto& smaller : enumerate_shapes(m - 1, cap)) {
    // Internal ids shift by one to make room for external vertex m-1.
    auto renumber = [&](int v) { return v >= m - 1 ? v + 1 : v; };
    const int b = 2 * m - 3;
    for (const auto& split : smaller.edges()) {
      std::vector<ShapeEdge> edges;
      for (const auto& e : smaller.edges()) {
        if (e.label == split.label)
          edges.push_back({e.label, renumber(e.from), b});
        else
          edges.push_back({e.label, renumber(e.from), renumber(e.to)});
      }
      edges.push_back({2 * m - 4, b, m - 1});
      edges.push_back({2 * m - 3, b, renumber(split.to)});
      out.emplace_back(m, std::move(edges));
    }
  }
  return out;
}

Subshape::Subshape(Shape parent, std::uint32_t contracted) : parent_(std::move(parent)), contracted_(contracted) {
  if (parent_.num_edges() >= 32 || (contracted_ >> parent_.num_edges()) != 0)
    throw ArgumentError("subshape: contraction mask out of range");
}

std::vector<int> Subshape::labels() const {
  std::vector<int> out;
  for (int j = 1; j <= parent_.num_edges(); ++j)
    if (!is_contracted(j)) out.push_back(j);
  return out;
}

std::vector<int> Subshape::vertex_classes() const {
  std::vector<int> root(static_cast<std::size_t>(parent_.num_vertices()));
  std::iota(root.begin(), root.end(), 0);
  std::function<int(int)> find = [&](int v) {
    while (root[static_cast<std::size_t>(v)] != v) v = root[static_cast<std::size_t>(v)];
    return v;
  };
  for (const auto& e : parent_.edges()) {
    if (!is_contracted(e.label)) continue;
    const int a = find(e.from), b = find(e.to);
    root[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
  }
  std::vector<int> cls(root.size());
  std::vector<int> ids(root.size(), -1);
  int next = 0;
  for (int v = 0; v < parent_.num_vertices(); ++v) {
    const int r = find(v);
    if (ids[static_cast<std::size_t>(r)] < 0) ids[static_cast<std::size_t>(r)] = next++;
    cls[static_cast<std::size_t>(v)] = ids[static_cast<std::size_t>(r)];
  }
  return cls;
}

int Subshape::num_quotient_vertices() const {
  const auto cls = vertex_classes();
  return *std::max_element(cls.begin(), cls.end()) + 1;
}

std::vector<Subshape> enumerate_subshapes(const Shape& shape) {
  std::vector<Subshape> out;
  const std::uint32_t count = 1u << shape.num_edges();
  for (std::uint32_t mask = 0; mask < count; ++mask) out.emplace_back(shape, mask);
  return out;
}

namespace {

void check_marks(const PlaneTree& tree, std::span<const int> marks) {
  for (int i : marks)
    if (i < 0 || i >= tree.size()) throw ArgumentError("backbone: marked vertex not in tree");
}

bool is_ancestor_or_equal(const std::vector<int>& parent, const std::vector<int>& depth, int a, int b) {
  if (depth[static_cast<std::size_t>(b)] < depth[static_cast<std::size_t>(a)]) return false;
  while (depth[static_cast<std::size_t>(b)] > depth[static_cast<std::size_t>(a)]) b = parent[static_cast<std::size_t>(b)];
  return a == b;
}

}  // namespace

Backbone backbone(const PlaneTree& tree, std::span<const int> marks) {
  check_marks(tree, marks);
  const auto parent = tree.parents();
  const auto n = static_cast<std::size_t>(tree.size());
  std::vector<char> in_span(n, 0), marked(n, 0);
  in_span[0] = 1;
  for (int i : marks) {
    marked[static_cast<std::size_t>(i)] = 1;
    for (int v = i; !in_span[static_cast<std::size_t>(v)]; v = parent[static_cast<std::size_t>(v)])
      in_span[static_cast<std::size_t>(v)] = 1;
  }
  std::vector<int> span_children(n, 0);
  for (std::size_t v = 1; v < n; ++v)
    if (in_span[v]) ++span_children[static_cast<std::size_t>(parent[v])];

  Backbone b;
  b.marks.assign(marks.begin(), marks.end());
  std::vector<char> reduced(n, 0);
  for (std::size_t v = 0; v < n; ++v) {
    if (!in_span[v]) continue;
    b.span.push_back(static_cast<int>(v));
    if (v == 0 || marked[v] || span_children[v] >= 2) {
      reduced[v] = 1;
      b.reduced_vertices.push_back(static_cast<int>(v));
    }
  }
  for (int v : b.reduced_vertices) {
    if (v == 0) continue;
    int u = v, length = 0;
    do {
      u = parent[static_cast<std::size_t>(u)];
      ++length;
    } while (!reduced[static_cast<std::size_t>(u)]);
    b.reduced_edges.push_back({u, v, length});
  }

  const int m = static_cast<int>(marks.size()) + 1;
  std::set<int> distinct(marks.begin(), marks.end());
  bool full = static_cast<int>(b.reduced_vertices.size()) == 2 * m - 2 && !marked[0] &&
              span_children[0] == 1 && static_cast<int>(distinct.size()) == m - 1;
  for (int v : b.reduced_vertices) {
    if (v == 0) continue;
    const auto uv = static_cast<std::size_t>(v);
    if (marked[uv] ? span_children[uv] != 0 : span_children[uv] != 2) full = false;
  }
  b.full = full;
  return b;
}

std::vector<Identification> identifications(const PlaneTree& tree, std::span<const int> marks,
                                            const Shape& shape) {
  if (static_cast<int>(marks.size()) != shape.m() - 1)
    throw ArgumentError("identifications: need m-1 marks for an m-shape");
  const Backbone b = backbone(tree, marks);
  const auto parent = tree.parents();
  const auto depth = tree.depths();
  const int m = shape.m();
  const int internal = m - 2;

  std::vector<int> images(static_cast<std::size_t>(shape.num_vertices()), 0);
  for (int l = 1; l < m; ++l) images[static_cast<std::size_t>(l)] = marks[static_cast<std::size_t>(l - 1)];

  std::vector<Identification> out;
  std::vector<std::size_t> choice(static_cast<std::size_t>(internal), 0);
  std::vector<char> used(static_cast<std::size_t>(tree.size()), 0);
  while (true) {
    for (int k = 0; k < internal; ++k)
      images[static_cast<std::size_t>(m + k)] = b.span[choice[static_cast<std::size_t>(k)]];

    std::fill(used.begin(), used.end(), 0);
    Identification id{images, {}};
    bool ok = true;
    for (const auto& e : shape.edges()) {
      const int top = images[static_cast<std::size_t>(e.from)];
      int bottom = images[static_cast<std::size_t>(e.to)];
      if (!is_ancestor_or_equal(parent, depth, top, bottom)) {
        ok = false;
        break;
      }
      id.lengths.push_back(depth[static_cast<std::size_t>(bottom)] - depth[static_cast<std::size_t>(top)]);
      // Tree edges are named by their lower endpoint.
      for (; bottom != top && ok; bottom = parent[static_cast<std::size_t>(bottom)]) {
        if (used[static_cast<std::size_t>(bottom)]) ok = false;
        used[static_cast<std::size_t>(bottom)] = 1;
      }
      if (!ok) break;
    }
    if (ok) out.push_back(std::move(id));

    int k = 0;
    for (; k < internal; ++k) {
      if (++choice[static_cast<std::size_t>(k)] < b.span.size()) break;
      choice[static_cast<std::size_t>(k)] = 0;
    }
    if (k == internal) break;
  }
  return out;
}

std::vector<CompatibleLabel> compatible_labels(const PlaneTree& tree, const Embedding& phi,
                                               std::span<const int> marks, const Shape& shape) {
  if (!is_consistent(tree, phi)) throw ArgumentError("compatible: embedding does not match tree");
  std::set<CompatibleLabel> labels;
  for (const auto& id : identifications(tree, marks, shape)) {
    CompatibleLabel label{id.lengths, {}};
    for (const auto& e : shape.edges())
      label.displacements.push_back(phi.positions[static_cast<std::size_t>(id.images[static_cast<std::size_t>(e.to)])] -
                                    phi.positions[static_cast<std::size_t>(id.images[static_cast<std::size_t>(e.from)])]);
    labels.insert(std::move(label));
  }
  return {labels.begin(), labels.end()};
}

bool compatible(const PlaneTree& tree, const Embedding& phi, std::span<const int> marks,
                const Shape& shape, std::span<const Site> displacements, std::span<const int> lengths) {
  if (static_cast<int>(displacements.size()) != shape.num_edges() ||
      static_cast<int>(lengths.size()) != shape.num_edges())
    throw ArgumentError("compatible: expected 2m-3 displacements and lengths");
  for (const auto& y : displacements)
    if (static_cast<int>(y.size()) != phi.dim) throw ArgumentError("compatible: displacement dimension mismatch");
  const CompatibleLabel want{{lengths.begin(), lengths.end()}, {displacements.begin(), displacements.end()}};
  for (const auto& label : compatible_labels(tree, phi, marks, shape))
    if (label == want) return true;
  return false;
}

}  // namespace mflt
