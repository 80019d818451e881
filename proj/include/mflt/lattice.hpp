#pragma once

#include <map>
#include <ostream>
#include <vector>

#include <json.hpp>

#include "mflt/exact_weight.hpp"

namespace mflt {

/// A point of Z^d.
using Site = std::vector<int>;

Site origin(int d);
Site unit_vector(int d, int axis, int sign = +1);
Site operator+(Site a, const Site& b);
Site operator-(Site a, const Site& b);
Site operator-(Site a);
int l1_norm(const Site& x);
/// The 2d nearest-neighbour steps, ordered +e_1, -e_1, +e_2, -e_2, ...
std::vector<Site> unit_steps(int d);

/// Finitely supported map Z^d -> exact weights. Zero entries are never stored.
class LatticeDistribution {
 public:
  explicit LatticeDistribution(int dim = 1) : dim_(dim) {}

  int dim() const { return dim_; }
  const std::map<Site, ExactWeight>& support() const { return support_; }
  bool empty() const { return support_.empty(); }

  void add(const Site& x, const ExactWeight& w);
  /// Zero weight of epow `epow` when x is outside the support.
  ExactWeight at(const Site& x, int epow) const;
  ExactWeight total(int epow) const;
  std::map<Site, double> to_float() const;

  friend bool operator==(const LatticeDistribution& a, const LatticeDistribution& b) {
    return a.dim_ == b.dim_ && a.support_ == b.support_;
  }

  nlohmann::json to_json() const;
  static LatticeDistribution from_json(const nlohmann::json& j, int dim);
  /// RFC-4180 CSV: x1..xd,num,den,epow,value.
  void write_csv(std::ostream& os) const;

 private:
  int dim_;
  std::map<Site, ExactWeight> support_;
};

/// Exact s-step simple random walk distribution on Z^d, for s = 0..max_steps.
/// Entry s has denominators dividing (2d)^s.
std::vector<std::map<Site, Rational>> walk_distributions(int max_steps, int d);

}  // namespace mflt
