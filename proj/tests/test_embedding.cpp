#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "mflt/embedding.hpp"
#include "mflt/errors.hpp"
#include "oracles.hpp"

using namespace mflt;

TEST_CASE("every embedding is visited once") {
  const auto tree = PlaneTree::decode("2,1,0,0");
  for (int d = 1; d <= 3; ++d) {
    long count = 0;
    std::set<std::vector<Site>> seen;
    for_each_embedding(tree, d, [&](const Embedding& phi) {
      ++count;
      CHECK(is_consistent(tree, phi));
      seen.insert(phi.positions);
    });
    CHECK(count == static_cast<long>(std::pow(2 * d, 3)));
    CHECK(seen.size() == static_cast<std::size_t>(count));
  }
}

TEST_CASE("configuration probabilities") {
  const auto tree = PlaneTree::decode("1,0");
  Embedding phi{2, {Site{0, 0}, Site{0, -1}}};
  CHECK(configuration_probability(tree, phi) == ExactWeight(Rational(1, 4), 2));
  Embedding bad{2, {Site{0, 0}, Site{1, 1}}};
  CHECK_FALSE(is_consistent(tree, bad));
  CHECK_THROWS_AS(configuration_probability(tree, bad), ArgumentError);
  for (int n = 1; n <= 5; ++n) {
    ExactWeight total = ExactWeight::zero(n);
    for (const auto& t : enumerate_plane_trees(n))
      for_each_embedding(t, 2, [&](const Embedding& e) { total += configuration_probability(t, e); });
    CHECK(total == size_probability_closed(n));
  }
}

TEST_CASE("two-point coefficient against embedding enumeration") {
  for (int d = 1; d <= 2; ++d)
    for (int n = 1; n <= 5; ++n) {
      const auto brute = oracle::two_point(n, d);
      const auto exact = two_point_coefficient_exact(n, d);
      CHECK(exact.support() == brute);
      CHECK(exact.total(n) == size_probability_closed(n) * Rational(n));
    }
}

TEST_CASE("depth split sums to the total") {
  const auto parts = two_point_coefficient_by_depth(5, 1);
  LatticeDistribution sum(1);
  for (const auto& p : parts)
    for (const auto& [x, w] : p.support()) sum.add(x, w);
  CHECK(sum == two_point_coefficient_exact(5, 1));
}

TEST_CASE("marked occupation moment against embedding enumeration") {
  const std::vector<Site> targets{Site{0}, Site{1}, Site{0}};
  for (int n = 1; n <= 5; ++n)
    for (const auto& tree : enumerate_plane_trees(n)) {
      Rational brute = 0;
      long count = 0;
      for_each_embedding(tree, 1, [&](const Embedding& phi) {
        long product = 1;
        for (const auto& x : targets) product *= std::count(phi.positions.begin(), phi.positions.end(), x);
        brute += product;
        ++count;
      });
      brute /= count;
      CHECK(marked_occupation_moment(tree, 1, targets) == brute);
    }
}

TEST_CASE("two-vertex moment value") {
  for (int d = 1; d <= 3; ++d) {
    const std::vector<Site> targets{origin(d), origin(d), unit_vector(d, 0)};
    CHECK(moment_sum_exact(2, d, targets) == ExactWeight(Rational(1, 2 * d), 2));
  }
}

TEST_CASE("rescaled empirical measure") {
  const auto tree = PlaneTree::decode("1,0");
  const auto mu = empirical_ise_measure(tree, Embedding{1, {Site{0}, Site{1}}});
  CHECK(mu.total_mass() == 1);
  CHECK(mu.lattice_masses().at(Site{0}) == Rational(1, 2));
  CHECK(mu.lattice_masses().at(Site{1}) == Rational(1, 2));
  CHECK(mu.location(Site{1})[0] == doctest::Approx(std::pow(2.0, -0.25)));
  const auto mu2 = empirical_ise_measure(PlaneTree::decode("2,0,0"), Embedding{2, {Site{0, 0}, Site{1, 0}, Site{1, 0}}});
  CHECK(mu2.lattice_masses().at(Site{1, 0}) == Rational(2, 3));
  CHECK(mu2.scale() == doctest::Approx(std::sqrt(2.0) * std::pow(3.0, -0.25)));
}

TEST_CASE("sampled embedded trees are consistent") {
  Rng rng(3);
  for (int i = 0; i < 20; ++i) {
    const auto [tree, phi] = sample_embedded_tree(40, 3, rng);
    CHECK(tree.size() == 40);
    CHECK(is_consistent(tree, phi));
  }
}
