#include "mflt/cli.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>

#include "mflt/embedding.hpp"
#include "mflt/errors.hpp"
#include "mflt/genfun.hpp"
#include "mflt/ise.hpp"
#include "mflt/plane_tree.hpp"
#include "mflt/scaling.hpp"
#include "mflt/shapes.hpp"
#include "mflt/wsaw.hpp"

namespace mflt {

using nlohmann::json;

nlohmann::json RunConfig::to_json() const {
  return {{"command", command}, {"params", params}, {"out", out}, {"format", format}};
}

RunConfig RunConfig::from_json(const nlohmann::json& j) {
  RunConfig config;
  if (!j.is_object()) throw ArgumentError("config file must hold a JSON object");
  if (j.contains("command")) config.command = j.at("command").get<std::string>();
  if (j.contains("params")) config.params = j.at("params");
  if (j.contains("out")) config.out = j.at("out").get<std::string>();
  if (j.contains("format")) config.format = j.at("format").get<std::string>();
  return config;
}

std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\r\n") == std::string::npos) return text;
  std::string quoted = "\"";
  for (char c : text) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + "\"";
}

std::string format_number(double value) {
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (std::isnan(value)) return "nan";
  char buffer[64];
  const auto result = std::to_chars(buffer, buffer + sizeof buffer, value, std::chars_format::general, 17);
  return std::string(buffer, result.ptr);
}

namespace {

constexpr int kSizeDistCap = 2000;
constexpr int kTwoPointCap = 40;
constexpr int kMaxDimension = 3;
constexpr int kMpointShapeCap = 6;
constexpr int kIseShapeCap = 4;
constexpr long kGridCap = 10'000'000;
constexpr int kMonteCarloSizeCap = 1'000'000;
constexpr long kSampleCap = 100'000'000;

const std::set<std::string> kKnownParams{"n",    "n_max",   "n_grid",  "d",       "m",         "l",   "u",
                                         "beta", "k",       "seed",    "samples", "threads",   "batches",
                                         "count_only"};

const std::map<std::string, std::vector<std::string>> kRequired{
    {"enumerate-trees", {"n"}},
    {"size-dist", {"n_max"}},
    {"two-point", {"n", "d"}},
    {"mpoint", {"n", "m", "k"}},
    {"shapes", {"m"}},
    {"ise-eval", {"m", "k"}},
    {"scaling-lemma41", {"k", "n_grid"}},
    {"scaling-lemma42", {"k", "u", "n_grid"}},
    {"mc-moments", {"n", "k", "samples", "seed"}},
    {"wsaw", {"n", "d", "beta"}},
    {"lattice-count", {"n", "d"}},
};

struct Checker {
  const json& params;
  std::vector<Diagnostic>& out;

  void invalid(const std::string& message) { out.push_back({Diagnostic::Kind::Invalid, message}); }
  void cap(const std::string& message) { out.push_back({Diagnostic::Kind::Cap, message}); }

  std::optional<long> integer(const std::string& key, long lo) {
    if (!params.contains(key)) return std::nullopt;
    const auto& v = params.at(key);
    if (!v.is_number_integer()) {
      invalid(key + " must be an integer");
      return std::nullopt;
    }
    const long value = v.get<long>();
    if (value < lo) {
      invalid(key + " must be at least " + std::to_string(lo));
      return std::nullopt;
    }
    return value;
  }

  void upper(const std::string& key, std::optional<long> value, long cap_value, const std::string& what) {
    if (value && *value > cap_value)
      cap(key + " = " + std::to_string(*value) + " exceeds the " + what + " cap of " + std::to_string(cap_value));
  }

  std::optional<std::vector<Momentum>> momenta() {
    if (!params.contains("k")) return std::nullopt;
    const auto& v = params.at("k");
    bool ok = v.is_array() && !v.empty();
    std::size_t dim = 0;
    if (ok)
      for (const auto& k : v) {
        if (!k.is_array() || k.empty()) ok = false;
        else {
          if (dim == 0) dim = k.size();
          if (k.size() != dim) ok = false;
          for (const auto& c : k)
            if (!c.is_number()) ok = false;
        }
      }
    if (!ok) {
      invalid("k must be a nonempty list of momenta of one dimension, each a nonempty list of numbers");
      return std::nullopt;
    }
    return v.get<std::vector<Momentum>>();
  }
};

std::vector<double> parse_betas(const json& value) {
  std::vector<double> out;
  const json list = value.is_array() ? value : json::array({value});
  for (const auto& b : list) {
    if (b.is_string() && (b == "inf" || b == "infinity")) out.push_back(std::numeric_limits<double>::infinity());
    else if (b.is_number()) out.push_back(b.get<double>());
    else throw ArgumentError("beta entries must be numbers or \"inf\"");
  }
  return out;
}

}  // namespace

std::vector<std::string> subcommands() {
  std::vector<std::string> out;
  for (const auto& [name, keys] : kRequired) out.push_back(name);
  return out;
}

std::vector<Diagnostic> validate(const RunConfig& config) {
  std::vector<Diagnostic> out;
  Checker check{config.params, out};
  const auto found = kRequired.find(config.command);
  if (found == kRequired.end()) {
    check.invalid("unknown subcommand '" + config.command + "'");
    return out;
  }
  if (config.format != "json" && config.format != "csv") check.invalid("format must be json or csv");
  if (!config.params.is_object()) {
    check.invalid("params must be a JSON object");
    return out;
  }
  for (const auto& [key, value] : config.params.items())
    if (!kKnownParams.count(key)) check.invalid("unknown parameter '" + key + "'");
  for (const auto& key : found->second)
    if (!config.params.contains(key)) check.invalid(config.command + " requires --" + (key == "n_max" ? "n-max" : key == "n_grid" ? "n-grid" : key));

  const auto& cmd = config.command;
  const auto n = check.integer("n", 1);
  const auto d = check.integer("d", 1);
  const auto m = check.integer("m", 2);
  check.integer("threads", 1);
  check.integer("batches", 2);
  const auto samples = check.integer("samples", 1);
  if (config.params.contains("seed") && !config.params.at("seed").is_number_integer()) check.invalid("seed must be an integer");
  if (config.params.contains("count_only") && !config.params.at("count_only").is_boolean()) check.invalid("count_only must be a boolean");
  const auto ks = check.momenta();
  if (d) check.upper("d", d, kMaxDimension, "dimension");

  if (cmd == "enumerate-trees") check.upper("n", n, kDefaultEnumerationCap, "plane-tree enumeration");
  if (cmd == "size-dist") check.upper("n_max", check.integer("n_max", 1), kSizeDistCap, "size-distribution");
  if (cmd == "two-point") check.upper("n", n, kTwoPointCap, "exact two-point");
  if (cmd == "shapes") check.upper("m", m, kDefaultShapeCap, "shape enumeration");
  if (cmd == "mpoint") {
    check.upper("m", m, kMpointShapeCap, "m-point shape");
    if (m && *m >= 3) check.upper("n", n, kMultiEdgeCoefficientCap, "m-point coefficient");
    else check.upper("n", n, kGridCap, "two-point coefficient");
  }
  if (cmd == "ise-eval") check.upper("m", m, kIseShapeCap, "ISE quadrature");
  if ((cmd == "mpoint" || cmd == "ise-eval") && m && ks && static_cast<long>(ks->size()) != *m - 1)
    check.invalid(cmd + " needs m - 1 = " + std::to_string(*m - 1) + " momenta, got " + std::to_string(ks->size()));
  if (ks && !ks->empty() && static_cast<long>(ks->front().size()) > kMaxDimension)
    check.cap("momentum dimension " + std::to_string(ks->front().size()) + " exceeds the dimension cap of " + std::to_string(kMaxDimension));

  if (cmd == "scaling-lemma41" || cmd == "scaling-lemma42") {
    if (ks && ks->size() != 1) check.invalid(cmd + " takes exactly one momentum");
    if (config.params.contains("n_grid")) {
      const auto& grid = config.params.at("n_grid");
      if (!grid.is_array() || grid.empty()) check.invalid("n_grid must be a nonempty list of integers");
      else
        for (const auto& v : grid) {
          if (!v.is_number_integer() || v.get<long>() < 1) check.invalid("n_grid entries must be positive integers");
          else if (v.get<long>() > kGridCap)
            check.cap("n_grid entry " + std::to_string(v.get<long>()) + " exceeds the scaling cap of " + std::to_string(kGridCap));
        }
    }
    if (cmd == "scaling-lemma42" && config.params.contains("u") &&
        (!config.params.at("u").is_number() || !(config.params.at("u").get<double>() > 0)))
      check.invalid("u must be a positive number");
  }
  if (cmd == "mc-moments") {
    check.upper("n", n, kMonteCarloSizeCap, "Monte Carlo size");
    check.upper("samples", samples, kSampleCap, "sample");
    if (ks && ks->size() > 3) check.cap("l = " + std::to_string(ks->size()) + " exceeds the moment cap of 3");
    const auto l = check.integer("l", 1);
    if (l && ks && static_cast<long>(ks->size()) != *l) check.invalid("l must equal the number of momenta");
  }
  if (cmd == "wsaw" || cmd == "lattice-count") {
    if (n && d && *d <= kMaxDimension) check.upper("n", n, lattice_tree_cap(static_cast<int>(*d)), "lattice-tree (d = " + std::to_string(*d) + ")");
    if (cmd == "wsaw" && n && d && *d <= kMaxDimension) {
      const double configurations = catalan(static_cast<int>(*n) - 1).get_d() * std::pow(2.0 * static_cast<double>(*d), static_cast<double>(*n - 1));
      if (configurations > kConfigurationCap)
        check.cap("n = " + std::to_string(*n) + " needs " + format_number(configurations) +
                  " configurations, above the configuration cap of " + format_number(kConfigurationCap));
    }
    if (cmd == "wsaw" && config.params.contains("beta")) {
      try {
        for (double b : parse_betas(config.params.at("beta")))
          if (!(b >= 0)) check.invalid("beta must be nonnegative");
      } catch (const ArgumentError& e) {
        check.invalid(e.what());
      }
    }
  }
  return out;
}

namespace {

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<json>> rows;
  json summary = json::object();
  /// Printed instead of the table when no output file is given.
  std::optional<std::string> text;
};

long param_long(const json& p, const std::string& key, long fallback = 0) { return p.contains(key) ? p.at(key).get<long>() : fallback; }
int param_int(const json& p, const std::string& key, int fallback = 0) { return static_cast<int>(param_long(p, key, fallback)); }

json weight_columns(const ExactWeight& w) {
  return json::array({w.coeff().get_num().get_str(), w.coeff().get_den().get_str(), w.epow()});
}

std::vector<Shape> cached_shapes(int m) {
  const char* dir = std::getenv("MFLT_CACHE_DIR");
  if (!dir || !*dir) return enumerate_shapes(m);
  const std::filesystem::path path = std::filesystem::path(dir) / ("shapes_m" + std::to_string(m) + ".json");
  const long expected = m == 2 ? 1 : double_factorial_odd(m - 2).get_si();
  if (std::ifstream in{path}) {
    try {
      const json j = json::parse(in);
      std::vector<Shape> shapes;
      for (const auto& s : j.at("shapes")) shapes.push_back(Shape::from_json(s));
      if (static_cast<long>(shapes.size()) == expected) return shapes;
    } catch (const std::exception&) {
    }
  }
  auto shapes = enumerate_shapes(m);
  json j{{"m", m}, {"shapes", json::array()}};
  for (const auto& s : shapes) j["shapes"].push_back(s.to_json());
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (std::ofstream out{path}) out << j.dump() << '\n';
  return shapes;
}

bool count_only(const json& p) { return p.contains("count_only") && p.at("count_only").get<bool>(); }

Table enumerate_trees_cmd(const json& p) {
  const auto trees = enumerate_plane_trees(param_int(p, "n"));
  Table t{{"index", "code", "num", "den", "epow"}, {}, {{"count", trees.size()}}, std::nullopt};
  if (count_only(p)) {
    t.text = std::to_string(trees.size());
    return t;
  }
  for (std::size_t i = 0; i < trees.size(); ++i) {
    json row = json::array({i, trees[i].encode()});
    for (auto& c : weight_columns(tree_probability(trees[i]))) row.push_back(c);
    t.rows.push_back(row);
  }
  return t;
}

Table size_dist_cmd(const json& p) {
  Table t{{"n", "num", "den", "epow"}, {}, json::object(), std::nullopt};
  for (int n = 1; n <= param_int(p, "n_max"); ++n) {
    json row = json::array({n});
    for (auto& c : weight_columns(size_probability_closed(n))) row.push_back(c);
    t.rows.push_back(row);
  }
  return t;
}

Table two_point_cmd(const json& p) {
  const int d = param_int(p, "d");
  Table t;
  for (int c = 1; c <= d; ++c) t.columns.push_back("x" + std::to_string(c));
  for (const char* c : {"num", "den", "epow"}) t.columns.push_back(c);
  const auto dist = two_point_coefficient_lagrange(param_int(p, "n"), d);
  for (const auto& [x, w] : dist.support()) {
    json row = json::array();
    for (int c : x) row.push_back(c);
    for (auto& c : weight_columns(w)) row.push_back(c);
    t.rows.push_back(row);
  }
  return t;
}

Table shapes_cmd(const json& p) {
  const auto shapes = cached_shapes(param_int(p, "m"));
  Table t{{"index", "shape"}, {}, {{"count", shapes.size()}}, std::nullopt};
  if (count_only(p)) {
    t.text = std::to_string(shapes.size());
    return t;
  }
  for (std::size_t i = 0; i < shapes.size(); ++i) t.rows.push_back({i, shapes[i].to_json()});
  return t;
}

Table mpoint_cmd(const json& p) {
  const auto ks = p.at("k").get<std::vector<Momentum>>();
  const auto shapes = cached_shapes(param_int(p, "m"));
  const int n = param_int(p, "n");
  Table t{{"index", "shape", "value"}, {}, json::object(), std::nullopt};
  double total = 0;
  for (std::size_t i = 0; i < shapes.size(); ++i) {
    const double value = t_hat_coefficient(shapes[i], n, edge_momenta(shapes[i], ks));
    total += value;
    t.rows.push_back({i, shapes[i].to_json(), value});
  }
  t.summary["total"] = total;
  return t;
}

Table ise_eval_cmd(const json& p) {
  const auto ks = p.at("k").get<std::vector<Momentum>>();
  const auto shapes = cached_shapes(param_int(p, "m"));
  Table t{{"index", "shape", "value", "error_estimate", "nodes_per_axis"}, {}, json::object(), std::nullopt};
  double total = 0;
  for (std::size_t i = 0; i < shapes.size(); ++i) {
    const auto r = A_hat_detailed(shapes[i], edge_momenta(shapes[i], ks));
    total += r.value;
    t.rows.push_back({i, shapes[i].to_json(), r.value, r.error_estimate, r.nodes_per_axis});
  }
  t.summary["total"] = total;
  return t;
}

Table ratio_table(const RatioReport& report) {
  Table t{{"n", "observed", "predicted", "ratio"}, {}, {{"max_deviation", report.max_deviation}}, std::nullopt};
  for (const auto& row : report.rows) t.rows.push_back({row.n, row.observed, row.predicted, row.ratio});
  return t;
}

Table lemma41_cmd(const json& p) {
  const auto ks = p.at("k").get<std::vector<Momentum>>();
  return ratio_table(lemma41_check(ks.front(), p.at("n_grid").get<std::vector<long>>()));
}

Table lemma42_cmd(const json& p) {
  const auto ks = p.at("k").get<std::vector<Momentum>>();
  return ratio_table(lemma42_check(ks.front(), p.at("u").get<double>(), p.at("n_grid").get<std::vector<long>>()));
}

Table mc_cmd(const json& p) {
  MonteCarloOptions options;
  options.n = param_int(p, "n");
  options.samples = param_long(p, "samples");
  options.seed = p.at("seed").get<std::uint64_t>();
  options.threads = param_int(p, "threads", 1);
  options.batches = param_int(p, "batches", 100);
  const std::vector<std::vector<Momentum>> sets{p.at("k").get<std::vector<Momentum>>()};
  const auto est = moment_convergence_mc(options, sets).front();
  Table t{{"l", "mean_re", "stderr_re", "mean_im", "stderr_im", "target"}, {}, json::object(), std::nullopt};
  t.rows.push_back({est.ks.size(), est.mean_re, est.stderr_re, est.mean_im, est.stderr_im, est.target});
  return t;
}

Table wsaw_cmd(const json& p) {
  const int n = param_int(p, "n");
  const int d = param_int(p, "d");
  const auto betas = parse_betas(p.at("beta"));
  const auto trees = enumerate_lattice_trees(n, d);
  const auto poly = intersection_polynomial(n, d);
  Table t{{"index", "bonds", "beta", "q_mass", "q_mass_exact"}, {}, {{"ell_n", trees.size()}}, std::nullopt};
  json partition = json::array();
  for (double beta : betas) partition.push_back({{"beta", format_number(beta)}, {"z_scaled", poly.evaluate_scaled(beta)}});
  t.summary["partition_function_times_e_n"] = partition;
  for (std::size_t i = 0; i < trees.size(); ++i) {
    const Rational numerator = configurations_onto(trees[i]).inverse_factorial_sum *
                               Rational(BigInt(1), power(BigInt(2 * d), static_cast<unsigned>(n - 1)));
    for (double beta : betas) {
      std::string exact;
      double value;
      if (beta == 0 || std::isinf(beta)) {
        const Rational q = ratio(ExactWeight(numerator, n), beta == 0 ? poly.at_zero() : poly.at_infinity());
        exact = to_string(q);
        value = q.get_d();
      } else {
        value = numerator.get_d() / poly.evaluate_scaled(beta);
      }
      t.rows.push_back({i, trees[i].to_json()["bonds"].dump(), format_number(beta), value, exact});
    }
  }
  return t;
}

Table lattice_count_cmd(const json& p) {
  const auto trees = enumerate_lattice_trees(param_int(p, "n"), param_int(p, "d"));
  Table t{{"n", "d", "count"}, {}, {{"count", trees.size()}}, std::to_string(trees.size())};
  t.rows.push_back({param_int(p, "n"), param_int(p, "d"), trees.size()});
  return t;
}

const std::map<std::string, std::function<Table(const json&)>> kHandlers{
    {"enumerate-trees", enumerate_trees_cmd}, {"size-dist", size_dist_cmd},     {"two-point", two_point_cmd},
    {"mpoint", mpoint_cmd},                   {"shapes", shapes_cmd},           {"ise-eval", ise_eval_cmd},
    {"scaling-lemma41", lemma41_cmd},         {"scaling-lemma42", lemma42_cmd}, {"mc-moments", mc_cmd},
    {"wsaw", wsaw_cmd},                       {"lattice-count", lattice_count_cmd},
};

std::string cell(const json& v) {
  if (v.is_string()) return csv_field(v.get<std::string>());
  if (v.is_number_float()) return format_number(v.get<double>());
  if (v.is_number() || v.is_boolean()) return v.dump();
  return csv_field(v.dump());
}

std::string render(const Table& t, const RunConfig& config) {
  if (config.format == "csv") {
    std::string text;
    for (std::size_t i = 0; i < t.columns.size(); ++i) text += (i ? "," : "") + csv_field(t.columns[i]);
    text += "\r\n";
    for (const auto& row : t.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) text += (i ? "," : "") + cell(row[i]);
      text += "\r\n";
    }
    return text;
  }
  json j{{"version", kVersion}, {"config", config.to_json()}, {"columns", t.columns}, {"rows", t.rows}, {"summary", t.summary}};
  return j.dump(2) + "\n";
}

}  // namespace

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const auto diagnostics = validate(config);
  if (!diagnostics.empty()) {
    bool cap = true;
    for (const auto& diag : diagnostics) {
      err << "error: " << diag.message << '\n';
      cap = cap && diag.kind == Diagnostic::Kind::Cap;
    }
    return cap ? exit_code::cap : exit_code::invalid;
  }
  try {
    const Table table = kHandlers.at(config.command)(config.params);
    if (config.out.empty()) {
      out << (table.text ? *table.text + "\n" : render(table, config));
      return exit_code::ok;
    }
    {
      std::ofstream data(config.out, std::ios::binary);
      if (!data) throw ArgumentError("cannot write " + config.out);
      data << render(table, config);
    }
    json manifest{{"version", kVersion},
                  {"config", config.to_json()},
                  {"data", {{"file", std::filesystem::path(config.out).filename().string()}, {"format", config.format}, {"rows", table.rows.size()}}},
                  {"summary", table.summary}};
    std::ofstream(config.out + ".manifest.json", std::ios::binary) << manifest.dump(2) << '\n';
    if (table.text) out << *table.text << '\n';
    return exit_code::ok;
  } catch (const CapError& e) {
    err << "error: " << e.what() << '\n';
    return exit_code::cap;
  } catch (const QuadratureError& e) {
    err << "error: " << e.what() << '\n';
    return exit_code::cap;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_code::invalid;
  }
}

}  // namespace mflt
