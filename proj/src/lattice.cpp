#include "mflt/lattice.hpp"

#include <cstdlib>

#include "mflt/errors.hpp"

namespace mflt {

Site origin(int d) { return Site(static_cast<std::size_t>(d), 0); }

Site unit_vector(int d, int axis, int sign) {
  Site e = origin(d);
  e.at(static_cast<std::size_t>(axis)) = sign;
  return e;
}

Site operator+(Site a, const Site& b) {
  if (a.size() != b.size()) throw ArgumentError("site dimension mismatch");
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
  return a;
}

Site operator-(Site a, const Site& b) {
  if (a.size() != b.size()) throw ArgumentError("site dimension mismatch");
  for (std::size_t i = 0; i < a.size(); ++i) a[i] -= b[i];
  return a;
}

Site operator-(Site a) {
  for (auto& c : a) c = -c;
  return a;
}

int l1_norm(const Site& x) {
  int r = 0;
  for (int c : x) r += std::abs(c);
  return r;
}

std::vector<Site> unit_steps(int d) {
  std::vector<Site> steps;
  for (int axis = 0; axis < d; ++axis) {
    steps.push_back(unit_vector(d, axis, +1));
    steps.push_back(unit_vector(d, axis, -1));
  }
  return steps;
}

void LatticeDistribution::add(const Site& x, const ExactWeight& w) {
  if (static_cast<int>(x.size()) != dim_) throw ArgumentError("LatticeDistribution: dimension mismatch");
  if (w.is_zero()) return;
  auto it = support_.find(x);
  if (it == support_.end()) {
    support_.emplace(x, w);
    return;
  }
  it->second += w;
  if (it->second.is_zero()) support_.erase(it);
}

ExactWeight LatticeDistribution::at(const Site& x, int epow) const {
  auto it = support_.find(x);
  return it == support_.end() ? ExactWeight::zero(epow) : it->second;
}

ExactWeight LatticeDistribution::total(int epow) const {
  ExactWeight sum = ExactWeight::zero(epow);
  for (const auto& [x, w] : support_) sum += w;
  return sum;
}

std::map<Site, double> LatticeDistribution::to_float() const {
  std::map<Site, double> out;
  for (const auto& [x, w] : support_) out.emplace(x, w.to_double());
  return out;
}

nlohmann::json LatticeDistribution::to_json() const {
  auto arr = nlohmann::json::array();
  for (const auto& [x, w] : support_) arr.push_back({{"x", x}, {"w", w}});
  return arr;
}

LatticeDistribution LatticeDistribution::from_json(const nlohmann::json& j, int dim) {
  LatticeDistribution out(dim);
  for (const auto& entry : j) out.add(entry.at("x").get<Site>(), entry.at("w").get<ExactWeight>());
  return out;
}

void LatticeDistribution::write_csv(std::ostream& os) const {
  for (int i = 0; i < dim_; ++i) os << "x" << (i + 1) << ",";
  os << "num,den,epow\r\n";
  for (const auto& [x, w] : support_) {
    for (int c : x) os << c << ",";
    os << w.coeff().get_num().get_str() << "," << w.coeff().get_den().get_str() << "," << w.epow()
       << "\r\n";
  }
}

std::vector<std::map<Site, Rational>> walk_distributions(int max_steps, int d) {
  if (d < 1) throw ArgumentError("walk_distributions: dimension must be positive");
  const auto steps = unit_steps(d);
  const Rational p(1, 2 * d);
  std::vector<std::map<Site, Rational>> out;
  out.push_back({{origin(d), Rational(1)}});
  for (int s = 1; s <= max_steps; ++s) {
    std::map<Site, Rational> next;
    for (const auto& [x, w] : out.back())
      for (const auto& e : steps) next[x + e] += w * p;
    out.push_back(std::move(next));
  }
  return out;
}

}  // namespace mflt
