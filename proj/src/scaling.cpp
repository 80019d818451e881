#include "mflt/scaling.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <numbers>
#include <thread>

#include "mflt/embedding.hpp"
#include "mflt/errors.hpp"
#include "mflt/plane_tree.hpp"
#include "mflt/shapes.hpp"

namespace mflt {

namespace {

const double kInvSqrt2Pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);

void finish(RatioReport& report) {
  report.max_deviation = 0;
  for (const auto& row : report.rows) report.max_deviation = std::max(report.max_deviation, std::abs(row.ratio - 1.0));
}

Momentum scaled(const Momentum& k, long n) {
  const double factor = std::sqrt(static_cast<double>(k.size())) * std::pow(static_cast<double>(n), -0.25);
  Momentum out = k;
  for (auto& c : out) c *= factor;
  return out;
}

double norm2(const Momentum& k) {
  double sum = 0;
  for (double c : k) sum += c * c;
  return sum;
}

// Exact arithmetic up to this n, lgamma beyond.
constexpr long kExactStirlingLimit = 2000;

}  // namespace

RatioReport stirling_check(std::span<const long> ns) {
  RatioReport report;
  for (long n : ns) {
    if (n < 1) throw ArgumentError("stirling_check: n must be positive");
    const double log_p = n <= kExactStirlingLimit ? size_probability_closed(static_cast<int>(n)).log_abs()
                                                  : log_coeff_tree_power(static_cast<int>(n), 1);
    const double log_predicted = std::log(kInvSqrt2Pi) - 1.5 * std::log(static_cast<double>(n));
    report.rows.push_back({n, std::exp(log_p), std::exp(log_predicted), std::exp(log_p - log_predicted)});
  }
  finish(report);
  return report;
}

RatioReport lemma41_check(const Momentum& k, std::span<const long> ns, const QuadratureOptions& options) {
  if (k.empty()) throw ArgumentError("lemma41_check: momentum needs at least one coordinate");
  const Shape two = enumerate_shapes(2).front();
  const std::vector<Momentum> limit{k};
  const double a = A_hat(two, limit, options);
  RatioReport report;
  for (long n : ns) {
    if (n < 1) throw ArgumentError("lemma41_check: n must be positive");
    const std::vector<Momentum> ks{scaled(k, n)};
    const double observed = t_hat_coefficient(two, static_cast<int>(n), ks);
    const double predicted = kInvSqrt2Pi / std::sqrt(static_cast<double>(n)) * a;
    report.rows.push_back({n, observed, predicted, observed / predicted});
  }
  finish(report);
  return report;
}

RatioReport lemma42_check(const Momentum& k, double u, std::span<const long> ns) {
  if (k.empty()) throw ArgumentError("lemma42_check: momentum needs at least one coordinate");
  if (!(u > 0)) throw ArgumentError("lemma42_check: u must be positive");
  RatioReport report;
  for (long n : ns) {
    if (n < 1) throw ArgumentError("lemma42_check: n must be positive");
    const int s = static_cast<int>(std::floor(u * std::sqrt(static_cast<double>(n))));
    if (s > n - 1) throw ArgumentError("lemma42_check: backbone length floor(u sqrt n) exceeds n - 1");
    const std::vector<Momentum> ks{scaled(k, n)};
    const std::vector<int> lengths{s};
    const double observed = t_hat_coefficient_fixed_s(static_cast<int>(n), ks, lengths);
    const double predicted =
        kInvSqrt2Pi / static_cast<double>(n) * u * std::exp(-u * u / 2) * std::exp(-norm2(k) * u / 2);
    report.rows.push_back({n, observed, predicted, observed / predicted});
  }
  finish(report);
  return report;
}

namespace {

// Positions of a size-conditioned embedded tree, flattened as pos[v * d + c].
void sample_positions(int n, int d, Rng& rng, std::vector<int>& pos) {
  const PlaneTree tree = sample_conditioned_tree(n, rng);
  const auto& counts = tree.child_counts();
  pos.assign(static_cast<std::size_t>(n) * static_cast<std::size_t>(d), 0);
  std::vector<std::pair<int, int>> stack{{0, counts[0]}};
  for (int v = 1; v < n; ++v) {
    while (stack.back().second == 0) stack.pop_back();
    const int parent = stack.back().first;
    --stack.back().second;
    stack.emplace_back(v, counts[static_cast<std::size_t>(v)]);
    const auto dir = rng.below(2 * static_cast<std::uint64_t>(d));
    for (int c = 0; c < d; ++c)
      pos[static_cast<std::size_t>(v * d + c)] = pos[static_cast<std::size_t>(parent * d + c)];
    pos[static_cast<std::size_t>(v * d) + dir / 2] += (dir % 2 == 0) ? 1 : -1;
  }
}

struct BatchSum {
  std::vector<std::complex<double>> sums;
  long count = 0;
};

}  // namespace

std::vector<MomentEstimate> moment_convergence_mc(const MonteCarloOptions& options,
                                                  std::span<const std::vector<Momentum>> k_sets,
                                                  const QuadratureOptions& quadrature) {
  const int n = options.n;
  if (n < 1 || n > 1'000'000) throw ArgumentError("moment_convergence_mc: n must be in [1, 10^6]");
  if (options.samples < 1) throw ArgumentError("moment_convergence_mc: need at least one sample");
  if (options.batches < 2) throw ArgumentError("moment_convergence_mc: need at least two batches");
  if (k_sets.empty() || k_sets[0].empty() || k_sets[0][0].empty())
    throw ArgumentError("moment_convergence_mc: need nonempty momentum sets");
  const std::size_t l = k_sets[0].size();
  const int d = static_cast<int>(k_sets[0][0].size());
  for (const auto& set : k_sets) {
    if (set.size() != l) throw ArgumentError("moment_convergence_mc: momentum sets of different lengths");
    for (const auto& k : set)
      if (static_cast<int>(k.size()) != d) throw ArgumentError("moment_convergence_mc: momenta of different dimensions");
  }

  // phase[(set, j, c)][x + n] = exp(i k_jc x d^{1/2} n^{-1/4})
  const double scale = std::sqrt(static_cast<double>(d)) * std::pow(static_cast<double>(n), -0.25);
  const std::size_t width = 2 * static_cast<std::size_t>(n) + 1;
  std::vector<std::vector<std::complex<double>>> phase;
  for (const auto& set : k_sets)
    for (const auto& k : set)
      for (int c = 0; c < d; ++c) {
        std::vector<std::complex<double>> row(width);
        for (std::size_t x = 0; x < width; ++x)
          row[x] = std::polar(1.0, k[static_cast<std::size_t>(c)] * scale * (static_cast<double>(x) - n));
        phase.push_back(std::move(row));
      }

  const auto batches = static_cast<std::size_t>(options.batches);
  std::vector<BatchSum> results(batches);
  auto run_batch = [&](std::size_t b) {
    const long share = options.samples / options.batches + (static_cast<long>(b) < options.samples % options.batches ? 1 : 0);
    Rng rng(Rng::derive(options.seed, b));
    BatchSum& out = results[b];
    out.sums.assign(k_sets.size(), 0.0);
    std::vector<int> pos;
    for (long sample = 0; sample < share; ++sample) {
      sample_positions(n, d, rng, pos);
      std::size_t row = 0;
      for (std::size_t set = 0; set < k_sets.size(); ++set) {
        std::complex<double> product = 1.0;
        for (std::size_t j = 0; j < l; ++j, row += static_cast<std::size_t>(d)) {
          std::complex<double> sum = 0.0;
          for (int v = 0; v < n; ++v) {
            std::complex<double> term = 1.0;
            for (int c = 0; c < d; ++c)
              term *= phase[row + static_cast<std::size_t>(c)][static_cast<std::size_t>(pos[static_cast<std::size_t>(v * d + c)] + n)];
            sum += term;
          }
          product *= sum / static_cast<double>(n);
        }
        out.sums[set] += product;
      }
    }
    out.count = share;
  };

  const auto workers = static_cast<std::size_t>(std::clamp(options.threads, 1, options.batches));
  std::atomic<std::size_t> next{0};
  auto work = [&]() {
    for (std::size_t b = next++; b < batches; b = next++) run_batch(b);
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }

  std::vector<MomentEstimate> out;
  for (std::size_t set = 0; set < k_sets.size(); ++set) {
    MomentEstimate est;
    est.ks = k_sets[set];
    std::vector<std::complex<double>> means;
    long total = 0;
    std::complex<double> grand = 0.0;
    for (const auto& batch : results) {
      if (batch.count == 0) continue;
      means.push_back(batch.sums[set] / static_cast<double>(batch.count));
      grand += batch.sums[set];
      total += batch.count;
    }
    grand /= static_cast<double>(total);
    est.mean_re = grand.real();
    est.mean_im = grand.imag();
    if (means.size() > 1) {
      double var_re = 0, var_im = 0;
      for (const auto& m : means) {
        var_re += (m.real() - est.mean_re) * (m.real() - est.mean_re);
        var_im += (m.imag() - est.mean_im) * (m.imag() - est.mean_im);
      }
      const double k = static_cast<double>(means.size());
      est.stderr_re = std::sqrt(var_re / (k - 1) / k);
      est.stderr_im = std::sqrt(var_im / (k - 1) / k);
    }
    est.target = l <= 3 ? moment_char(est.ks, quadrature) : std::nan("");
    out.push_back(std::move(est));
  }
  return out;
}

namespace {

ExactWeight abs(const ExactWeight& w) { return w.coeff() < 0 ? ExactWeight(-w.coeff(), w.epow()) : w; }

bool at_most(const ExactWeight& a, const ExactWeight& b) { return a.epow() == b.epow() && a.coeff() <= b.coeff(); }

void check_bound(DegenerateDecomposition& out) {
  out.multiplicity_bound = double_factorial_odd(out.l - 1).get_si() - 1;
  out.identity_holds = out.s == out.u + out.e;
  out.bound_holds = at_most(abs(out.s - out.shape_sum), out.e * Rational(out.multiplicity_bound));
}

// Calls visit(marks) for every l-tuple of vertices of a size-n tree.
template <class Visit>
void for_each_marks(int n, int l, Visit&& visit) {
  std::vector<int> marks(static_cast<std::size_t>(l), 0);
  while (true) {
    visit(std::span<const int>(marks));
    std::size_t j = 0;
    while (j < marks.size() && ++marks[j] == n) marks[j++] = 0;
    if (j == marks.size()) return;
  }
}

long count_compatible_shapes(const PlaneTree& tree, std::span<const int> marks, const std::vector<Shape>& shapes) {
  long count = 0;
  for (const auto& shape : shapes) count += static_cast<long>(identifications(tree, marks, shape).size());
  return count;
}

void check_decomposition_args(int n, int l) {
  if (n < 1) throw ArgumentError("degenerate_decomposition: n must be positive");
  if (l < 2) throw ArgumentError("degenerate_decomposition: l must be at least 2");
  if (n > 7 || l > 4) throw CapError("degenerate_decomposition: brute force capped at n <= 7, l <= 4");
}

}  // namespace

DegenerateDecomposition degenerate_decomposition(int n, int l) {
  check_decomposition_args(n, l);
  const auto shapes = enumerate_shapes(l + 1);
  DegenerateDecomposition out;
  out.n = n;
  out.l = l;
  out.s = size_probability_closed(n) * Rational(power(BigInt(n), static_cast<unsigned>(l)));
  out.u = out.e = out.shape_sum = out.shape_sum_formula = ExactWeight::zero(n);
  for (const auto& tree : enumerate_plane_trees(n)) {
    const ExactWeight p = tree_probability(tree);
    Rational full = 0, degenerate = 0, counted = 0;
    for_each_marks(n, l, [&](std::span<const int> marks) {
      (backbone(tree, marks).full ? full : degenerate) += 1;
      counted += count_compatible_shapes(tree, marks, shapes);
    });
    out.u += p * full;
    out.e += p * degenerate;
    out.shape_sum += p * counted;
  }
  for (const auto& shape : shapes)
    for (const auto& lambda : enumerate_subshapes(shape)) out.shape_sum_formula += subshape_coefficient_at_zero(lambda, n);
  check_bound(out);
  return out;
}

DegenerateDecomposition degenerate_decomposition_at(int n, int d, std::span<const Site> targets) {
  const int l = static_cast<int>(targets.size());
  check_decomposition_args(n, l);
  for (const auto& x : targets)
    if (static_cast<int>(x.size()) != d) throw ArgumentError("degenerate_decomposition_at: target dimension mismatch");
  const auto shapes = enumerate_shapes(l + 1);
  DegenerateDecomposition out;
  out.n = n;
  out.l = l;
  out.s = moment_sum_exact(n, d, targets);
  out.u = out.e = out.shape_sum = out.shape_sum_formula = ExactWeight::zero(n);
  for (const auto& tree : enumerate_plane_trees(n)) {
    Rational full = 0, degenerate = 0, counted = 0;
    for_each_embedding(tree, d, [&](const Embedding& phi) {
      for_each_marks(n, l, [&](std::span<const int> marks) {
        for (std::size_t j = 0; j < marks.size(); ++j)
          if (phi.positions[static_cast<std::size_t>(marks[j])] != targets[j]) return;
        (backbone(tree, marks).full ? full : degenerate) += 1;
        counted += count_compatible_shapes(tree, marks, shapes);
      });
    });
    const ExactWeight p = tree_probability(tree) *
                          Rational(BigInt(1), power(BigInt(2 * d), static_cast<unsigned>(n - 1)));
    out.u += p * full;
    out.e += p * degenerate;
    out.shape_sum += p * counted;
  }
  check_bound(out);
  return out;
}

}  // namespace mflt
