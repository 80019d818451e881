#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "mflt/embedding.hpp"
#include "mflt/lattice.hpp"
#include "mflt/plane_tree.hpp"

namespace mflt {

inline constexpr int kDefaultShapeCap = 9;

/// Shape edge oriented away from external vertex 0.
struct ShapeEdge {
  int label = 0;
  int from = 0;
  int to = 0;
  friend bool operator==(const ShapeEdge&, const ShapeEdge&) = default;
};

/// An m-shape: external vertices 0..m-1 of degree 1, internal vertices
/// m..2m-3 of degree 3, edges labelled 1..2m-3.
///
/// Labels are canonical. The 2- and 3-shapes are 0-1 (label 1) and
/// 0-a (1), a-1 (2), a-2 (3). An m-shape arises from an (m-1)-shape by placing
/// a new internal vertex b on edge j = u-w: u-b keeps label j, the new leaf
/// edge b-(m-1) gets 2m-4 and b-w gets 2m-3.
class Shape {
 public:
  /// Validates degrees, connectivity, orientation and labelling.
  Shape(int m, std::vector<ShapeEdge> edges);

  int m() const { return m_; }
  int num_vertices() const { return 2 * m_ - 2; }
  int num_edges() const { return 2 * m_ - 3; }
  /// Edges indexed by label - 1.
  const std::vector<ShapeEdge>& edges() const { return edges_; }
  const ShapeEdge& edge(int label) const { return edges_.at(static_cast<std::size_t>(label - 1)); }
  bool is_external(int v) const { return v < m_; }

  /// Bitmask (bit i for leaf i >= 1) of the leaves separated from vertex 0 by `label`.
  std::uint32_t labels_below(int label) const;

  /// Topology code invariant under edge relabelling and internal renumbering.
  std::string canonical_code() const;
  /// Isomorphism respecting external labels.
  bool same_topology(const Shape& other) const { return canonical_code() == other.canonical_code(); }

  friend bool operator==(const Shape& a, const Shape& b) { return a.m_ == b.m_ && a.edges_ == b.edges_; }

  nlohmann::json to_json() const;
  static Shape from_json(const nlohmann::json& j);

 private:
  int m_;
  std::vector<ShapeEdge> edges_;
};

/// The (2m-5)!! canonical m-shapes, in insertion order. Throws ArgumentError
/// outside 2 <= m <= cap.
std::vector<Shape> enumerate_shapes(int m, int cap = kDefaultShapeCap);

/// A shape with a subset of its edges contracted to points.
class Subshape {
 public:
  Subshape(Shape parent, std::uint32_t contracted);

  const Shape& parent() const { return parent_; }
  std::uint32_t contracted_mask() const { return contracted_; }
  bool is_contracted(int label) const { return (contracted_ >> (label - 1)) & 1u; }
  /// e(lambda): labels that survive.
  std::vector<int> labels() const;
  /// Class of each shape vertex in the quotient multigraph.
  std::vector<int> vertex_classes() const;
  int num_quotient_vertices() const;

 private:
  Shape parent_;
  std::uint32_t contracted_;
};

/// All 2^{2m-3} subshapes, by increasing contraction mask.
std::vector<Subshape> enumerate_subshapes(const Shape& shape);

struct BackboneEdge {
  int from = 0;
  int to = 0;
  int length = 0;
};

/// The subtree of T spanning the root and the marks i_1..i_{m-1}, with
/// unmarked degree-2 vertices suppressed.
struct Backbone {
  std::vector<int> marks;
  /// Vertices of the spanning subtree, ascending.
  std::vector<int> span;
  /// Root, marks and branch points, ascending.
  std::vector<int> reduced_vertices;
  std::vector<BackboneEdge> reduced_edges;
  /// True when the reduced tree is a binary m-skeleton with no contracted
  /// edge: root of degree 1, distinct marks that are leaves, branch points of
  /// degree 3.
  bool full = false;
};

Backbone backbone(const PlaneTree& tree, std::span<const int> marks);

/// One way to read a backbone as `shape` with contractions: the tree vertex
/// of each shape vertex and the path length b_j of each edge.
struct Identification {
  std::vector<int> images;
  std::vector<int> lengths;
};

/// Every identification of the backbone of (tree, marks) with `shape`,
/// found by enumerating images of the internal shape vertices.
std::vector<Identification> identifications(const PlaneTree& tree, std::span<const int> marks,
                                            const Shape& shape);

/// (s, y) pair for which a configuration is compatible with (shape; y, s).
struct CompatibleLabel {
  std::vector<int> lengths;
  std::vector<Site> displacements;
  auto operator<=>(const CompatibleLabel&) const = default;
};

/// Distinct (s, y) such that (T, phi, marks) is compatible with (shape; y, s).
std::vector<CompatibleLabel> compatible_labels(const PlaneTree& tree, const Embedding& phi,
                                               std::span<const int> marks, const Shape& shape);

bool compatible(const PlaneTree& tree, const Embedding& phi, std::span<const int> marks,
                const Shape& shape, std::span<const Site> displacements,
                std::span<const int> lengths);

}  // namespace mflt
