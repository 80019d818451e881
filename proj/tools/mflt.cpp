#include <cstdint>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mflt/cli.hpp"

namespace {

std::vector<double> parse_vector(const std::string& text) {
  std::vector<double> out;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, ',')) out.push_back(std::stod(item));
  if (out.empty()) throw std::invalid_argument("empty vector");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mean-field lattice trees: exact enumeration, generating functions and ISE scaling checks"};
  std::string command, config_path, out, format;
  long n = 0, n_max = 0, samples = 0;
  int d = 0, m = 0, l = 0, threads = 0, batches = 0;
  double u = 0;
  std::uint64_t seed = 0;
  std::vector<std::string> ks, betas;
  std::vector<long> n_grid;
  bool count_only = false;

  app.add_option("command", command, "Subcommand");
  app.add_option("--config", config_path, "JSON config file or manifest; flags override it");
  auto* o_n = app.add_option("--n", n, "Tree size");
  auto* o_n_max = app.add_option("--n-max", n_max, "Largest tree size");
  auto* o_grid = app.add_option("--n-grid", n_grid, "Tree sizes for scaling checks")->delimiter(',');
  auto* o_d = app.add_option("--d", d, "Lattice dimension");
  auto* o_m = app.add_option("--m", m, "Number of shape leaves including the root");
  auto* o_l = app.add_option("--l", l, "Moment order");
  auto* o_u = app.add_option("--u", u, "Backbone length in units of n^{1/2}");
  auto* o_beta = app.add_option("--beta", betas, "Self-avoidance strength; repeatable, 'inf' allowed")->delimiter(',');
  auto* o_k = app.add_option("--k", ks, "Momentum as comma-separated coordinates; repeatable");
  auto* o_seed = app.add_option("--seed", seed, "Random seed");
  auto* o_samples = app.add_option("--samples", samples, "Monte Carlo samples");
  auto* o_threads = app.add_option("--threads", threads, "Worker threads");
  auto* o_batches = app.add_option("--batches", batches, "Batches for error bars");
  auto* o_out = app.add_option("--out", out, "Output file; a manifest is written next to it");
  auto* o_format = app.add_option("--format", format, "json or csv");
  auto* o_count = app.add_flag("--count-only", count_only, "Print only the number of objects");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return mflt::exit_code::invalid;
  }

  mflt::RunConfig config;
  try {
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw std::runtime_error("cannot read config file " + config_path);
      const auto j = nlohmann::json::parse(in);
      // a manifest carries its run config under "config"
      config = mflt::RunConfig::from_json(j.contains("config") && !j.contains("command") ? j.at("config") : j);
    }
    if (!command.empty()) config.command = command;
    auto& p = config.params;
    if (*o_n) p["n"] = n;
    if (*o_n_max) p["n_max"] = n_max;
    if (*o_grid) p["n_grid"] = n_grid;
    if (*o_d) p["d"] = d;
    if (*o_m) p["m"] = m;
    if (*o_l) p["l"] = l;
    if (*o_u) p["u"] = u;
    if (*o_seed) p["seed"] = seed;
    if (*o_samples) p["samples"] = samples;
    if (*o_threads) p["threads"] = threads;
    if (*o_batches) p["batches"] = batches;
    if (*o_count) p["count_only"] = count_only;
    if (*o_k) {
      p["k"] = nlohmann::json::array();
      for (const auto& k : ks) p["k"].push_back(parse_vector(k));
    }
    if (*o_beta) {
      p["beta"] = nlohmann::json::array();
      for (const auto& b : betas) {
        if (b == "inf" || b == "infinity") p["beta"].push_back("inf");
        else p["beta"].push_back(std::stod(b));
      }
    }
    if (*o_out) config.out = out;
    if (*o_format) config.format = format;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return mflt::exit_code::invalid;
  }
  return mflt::run(config, std::cout, std::cerr);
}
