#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

namespace mflt {

inline constexpr const char* kVersion = "0.1.0";

/// One CLI invocation. `params` holds typed values keyed by flag name with
/// dashes replaced by underscores: n, n_max, n_grid, d, m, l, u, beta, k,
/// seed, samples, threads, batches, count_only.
struct RunConfig {
  std::string command;
  nlohmann::json params = nlohmann::json::object();
  std::string out;
  std::string format = "json";

  nlohmann::json to_json() const;
  /// Accepts {"command", "params", "out", "format"}; missing fields keep defaults.
  static RunConfig from_json(const nlohmann::json& j);
};

struct Diagnostic {
  enum class Kind { Invalid, Cap };
  Kind kind = Kind::Invalid;
  std::string message;
};

std::vector<std::string> subcommands();

/// Every problem with `config`, without running anything.
std::vector<Diagnostic> validate(const RunConfig& config);

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int invalid = 2;
inline constexpr int cap = 3;
}  // namespace exit_code

/// Validates, runs, and writes results: to stdout when config.out is empty,
/// otherwise to config.out plus a manifest at config.out + ".manifest.json".
/// Errors go to `err`. Returns an exit_code value.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// RFC-4180 field quoting.
std::string csv_field(const std::string& text);
/// Shortest text for integers, 17 significant digits for other doubles.
std::string format_number(double value);

}  // namespace mflt
