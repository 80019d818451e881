#include <doctest.h>

#include <fstream>
#include <set>

#include "mflt/errors.hpp"
#include "mflt/shapes.hpp"

using namespace mflt;

#ifndef MFLT_GOLDEN_DIR
#define MFLT_GOLDEN_DIR "tests/golden"
#endif

TEST_CASE("shape counts are odd double factorials") {
  CHECK(enumerate_shapes(2).size() == 1);
  for (int m = 3; m <= 7; ++m) {
    const auto shapes = enumerate_shapes(m);
    CHECK(BigInt(static_cast<long>(shapes.size())) == double_factorial_odd(m - 2));
    std::set<std::string> codes;
    for (const auto& s : shapes) {
      codes.insert(s.canonical_code());
      CHECK(s.num_edges() == 2 * m - 3);
    }
    CHECK(codes.size() == shapes.size());
  }
  CHECK_THROWS_AS(enumerate_shapes(1), ArgumentError);
  CHECK_THROWS_AS(enumerate_shapes(10), ArgumentError);
}

TEST_CASE("canonical labelling of small shapes") {
  const auto three = enumerate_shapes(3).front();
  CHECK(three.edge(1) == ShapeEdge{1, 0, 3});
  CHECK(three.edge(2) == ShapeEdge{2, 3, 1});
  CHECK(three.edge(3) == ShapeEdge{3, 3, 2});
  CHECK(three.labels_below(1) == 0b110u);
  CHECK(three.labels_below(2) == 0b010u);
}

TEST_CASE("shapes reject malformed edge sets") {
  CHECK_THROWS_AS(Shape(3, {{1, 0, 3}, {2, 3, 1}, {3, 3, 1}}), ArgumentError);
  CHECK_THROWS_AS(Shape(3, {{1, 0, 3}, {2, 3, 1}}), ArgumentError);
  CHECK_THROWS_AS(Shape(3, {{1, 0, 3}, {2, 1, 3}, {3, 3, 2}}), ArgumentError);
}

TEST_CASE("json round trip and golden m = 4 table") {
  const auto shapes = enumerate_shapes(4);
  nlohmann::json all = nlohmann::json::array();
  for (const auto& s : shapes) {
    CHECK(Shape::from_json(s.to_json()) == s);
    all.push_back(s.to_json());
  }
  std::ifstream in(std::string(MFLT_GOLDEN_DIR) + "/shapes_m4.json");
  REQUIRE(in);
  CHECK(nlohmann::json::parse(in) == all);
}

TEST_CASE("subshape counts") {
  for (int m = 2; m <= 5; ++m)
    for (const auto& s : enumerate_shapes(m)) CHECK(enumerate_subshapes(s).size() == (1u << (2 * m - 3)));
  const Subshape fully(enumerate_shapes(3).front(), 0b111u);
  CHECK(fully.labels().empty());
  CHECK(fully.num_quotient_vertices() == 1);
  const Subshape one(enumerate_shapes(3).front(), 0b001u);
  CHECK(one.labels() == std::vector<int>{2, 3});
  CHECK(one.num_quotient_vertices() == 3);
}

TEST_CASE("backbone of a marked tree") {
  // 0 -> 1 -> {2, 3}; marks 2 and 3 give a full 3-skeleton.
  const auto tree = PlaneTree::decode("1,2,0,0");
  const std::vector<int> marks{2, 3};
  const auto b = backbone(tree, marks);
  CHECK(b.full);
  CHECK(b.span == std::vector<int>{0, 1, 2, 3});
  CHECK(b.reduced_vertices == std::vector<int>{0, 1, 2, 3});
  const std::vector<int> same{2, 2};
  CHECK_FALSE(backbone(tree, same).full);
  const std::vector<int> root_mark{0, 2};
  CHECK_FALSE(backbone(tree, root_mark).full);
}

TEST_CASE("at most one identification per shape") {
  for (int n = 1; n <= 5; ++n)
    for (const auto& tree : enumerate_plane_trees(n))
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
          for (int c = 0; c < n; ++c) {
            const std::vector<int> marks{a, b, c};
            long total = 0;
            for (const auto& shape : enumerate_shapes(4)) {
              const auto ids = identifications(tree, marks, shape);
              CHECK(ids.size() <= 1);
              total += static_cast<long>(ids.size());
            }
            CHECK(total >= 1);
            if (backbone(tree, marks).full) CHECK(total == 1);
          }
}

TEST_CASE("compatible labels follow identifications") {
  const auto tree = PlaneTree::decode("1,2,0,0");
  const auto shape = enumerate_shapes(3).front();
  const std::vector<int> marks{2, 3};
  const Embedding phi{1, {Site{0}, Site{1}, Site{2}, Site{0}}};
  const auto labels = compatible_labels(tree, phi, marks, shape);
  REQUIRE(labels.size() == 1);
  CHECK(labels[0].lengths == std::vector<int>{1, 1, 1});
  CHECK(labels[0].displacements == std::vector<Site>{Site{1}, Site{1}, Site{-1}});
  const std::vector<Site> ys{Site{1}, Site{1}, Site{-1}};
  const std::vector<int> ss{1, 1, 1};
  CHECK(compatible(tree, phi, marks, shape, ys, ss));
  const std::vector<Site> wrong{Site{1}, Site{-1}, Site{1}};
  CHECK_FALSE(compatible(tree, phi, marks, shape, wrong, ss));
  const std::vector<Site> short_list{Site{1}};
  CHECK_THROWS_AS(compatible(tree, phi, marks, shape, short_list, ss), ArgumentError);
}
