#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "mflt/cli.hpp"

using namespace mflt;

namespace {

RunConfig config_of(std::string command, nlohmann::json params) {
  RunConfig c;
  c.command = std::move(command);
  c.params = std::move(params);
  return c;
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("validation diagnostics") {
  const auto missing_seed = validate(config_of("mc-moments", {{"n", 64}, {"k", {{1.0}}}, {"samples", 10}}));
  REQUIRE(missing_seed.size() == 1);
  CHECK(missing_seed[0].message.find("seed") != std::string::npos);

  const auto too_big = validate(config_of("two-point", {{"n", 50}, {"d", 1}}));
  REQUIRE(too_big.size() == 1);
  CHECK(too_big[0].kind == Diagnostic::Kind::Cap);
  CHECK(too_big[0].message.find("40") != std::string::npos);

  CHECK(validate(config_of("two-point", {{"n", 5}, {"d", 2}})).empty());
  CHECK(validate(config_of("mc-moments", {{"n", 64}, {"k", {{1.0}}}, {"samples", 10}, {"seed", 1}})).empty());
  CHECK(validate(config_of("frobnicate", nlohmann::json::object())).size() == 1);
  CHECK(validate(config_of("shapes", {{"m", 4}, {"colour", 1}})).size() == 1);
  CHECK(validate(config_of("ise-eval", {{"m", 3}, {"k", {{1.0}}}})).size() == 1);
  CHECK(subcommands().size() == 11);
}

TEST_CASE("exit codes") {
  std::ostringstream out, err;
  CHECK(run(config_of("two-point", {{"n", 50}, {"d", 1}}), out, err) == exit_code::cap);
  CHECK(run(config_of("two-point", {{"n", "five"}, {"d", 1}}), out, err) == exit_code::invalid);
  CHECK(run(config_of("nope", nlohmann::json::object()), out, err) == exit_code::invalid);
  CHECK_FALSE(err.str().empty());
}

TEST_CASE("size distribution table") {
  auto c = config_of("size-dist", {{"n_max", 12}});
  c.format = "csv";
  std::ostringstream out, err;
  REQUIRE(run(c, out, err) == exit_code::ok);
  const std::string text = out.str();
  CHECK(text.rfind("n,num,den,epow\r\n1,1,1,1\r\n2,1,1,2\r\n3,3,2,3\r\n", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 13);
}

TEST_CASE("counts printed directly") {
  std::ostringstream out, err;
  REQUIRE(run(config_of("shapes", {{"m", 6}, {"count_only", true}}), out, err) == exit_code::ok);
  CHECK(out.str() == "105\n");
  std::ostringstream out2;
  REQUIRE(run(config_of("lattice-count", {{"n", 5}, {"d", 1}}), out2, err) == exit_code::ok);
  CHECK(out2.str() == "5\n");
}

TEST_CASE("artifacts embed the config and are reproducible") {
  const auto dir = std::filesystem::temp_directory_path() / "mflt_cli_test";
  std::filesystem::create_directories(dir);
  auto c = config_of("wsaw", {{"n", 3}, {"d", 2}, {"beta", {0, 1.5, "inf"}}});
  c.out = (dir / "wsaw.json").string();
  std::ostringstream out, err;
  REQUIRE(run(c, out, err) == exit_code::ok);
  const auto first = slurp(c.out);
  const auto manifest = nlohmann::json::parse(slurp(c.out + ".manifest.json"));
  CHECK(manifest.at("version") == kVersion);
  CHECK(manifest.at("config") == c.to_json());
  CHECK(nlohmann::json::parse(first).at("config") == c.to_json());
  REQUIRE(run(RunConfig::from_json(manifest.at("config")), out, err) == exit_code::ok);
  CHECK(slurp(c.out) == first);
  std::filesystem::remove_all(dir);
}

TEST_CASE("shape cache directory") {
  const auto dir = std::filesystem::temp_directory_path() / "mflt_cache_test";
  std::filesystem::remove_all(dir);
  setenv("MFLT_CACHE_DIR", dir.c_str(), 1);
  std::ostringstream a, b, err;
  REQUIRE(run(config_of("shapes", {{"m", 5}}), a, err) == exit_code::ok);
  CHECK(std::filesystem::exists(dir / "shapes_m5.json"));
  REQUIRE(run(config_of("shapes", {{"m", 5}}), b, err) == exit_code::ok);
  CHECK(a.str() == b.str());
  unsetenv("MFLT_CACHE_DIR");
  std::filesystem::remove_all(dir);
}

TEST_CASE("csv formatting") {
  CHECK(csv_field("plain") == "plain");
  CHECK(csv_field("a,b") == "\"a,b\"");
  CHECK(csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
  CHECK(format_number(0.1) == "0.10000000000000001");
  CHECK(format_number(2.0) == "2");
  CHECK(format_number(std::numeric_limits<double>::infinity()) == "inf");
}
