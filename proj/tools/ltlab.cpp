// Command-line front end: ltlab --config run.json [--seed S] [--threads T] [--out DIR] [--assert]
//
// Exit codes: 0 success, 2 configuration error, 3 failed assertion (--assert), 1 other errors.

#include <cstdio>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "ltlab/error.hpp"
#include "ltlab/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Local-time exceptional-set laboratory"};
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
  std::optional<std::string> out;
  bool assert_mode = false;
  app.add_option("--config", config_path, "JSON run configuration")->required();
  app.add_option("--seed", seed, "Override the configured seed");
  app.add_option("--threads", threads, "Worker threads (0 = all cores); never changes results");
  app.add_option("--out", out, "Output directory");
  app.add_flag("--assert", assert_mode, "Exit with status 3 when a built-in check fails");
  CLI11_PARSE(app, argc, argv);

  ltlab::RunConfig cfg;
  try {
    std::ifstream is(config_path);
    if (!is) throw ltlab::ConfigError("cannot open config file '" + config_path + "'");
    nlohmann::json j;
    try {
      is >> j;
    } catch (const nlohmann::json::parse_error& e) {
      throw ltlab::ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    cfg = ltlab::RunConfig::from_json(j);
    if (seed) cfg.seed = *seed;
    if (threads) cfg.threads = *threads;
    if (out) cfg.out = *out;
  } catch (const ltlab::ConfigError& e) {
    std::fprintf(stderr, "ltlab: %s\n", e.what());
    return 2;
  }

  try {
    const ltlab::RunReport report = ltlab::run(cfg);
    std::printf("%s: wrote %zu files to %s\n", cfg.mode.c_str(), report.manifest["outputs"].size(), cfg.out.c_str());
    for (const auto& f : report.failures) std::printf("check failed: %s\n", f.c_str());
    if (assert_mode && !report.passed()) return 3;
  } catch (const ltlab::ConfigError& e) {
    std::fprintf(stderr, "ltlab: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "ltlab: error: %s\n", e.what());
    return 1;
  }
  return 0;
}
