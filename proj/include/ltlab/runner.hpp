#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ltlab/lattice.hpp"

namespace ltlab {

/// Experiment description read from JSON. Unknown keys are rejected.
struct RunConfig {
  DomainSpec domain = DomainSpec::unit_square();
  std::vector<int> N{128};
  std::vector<double> theta{1.0};
  double lambda = 0.3;
  // thick | thin | light | avoided | isomorphism | oracle-grid | cover | scaling
  std::string mode = "thick";
  int replicas = 10;
  std::uint64_t seed = 1;
  double eps = 0.1;  // inner region, as a fraction of diam(D)
  int r = 0;         // profile radius; 0 disables profiles
  double b = 0.5;    // light threshold
  double t = 2.0;    // isomorphism: rho-local time
  int block = 4;     // isomorphism: block side
  std::string level = "thick";  // scaling: thick | avoided
  double tolerance = 0.15;      // scaling: exponent tolerance under --assert
  bool render = true;
  std::string out = "out";
  unsigned threads = 0;

  static RunConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
  void validate() const;
};

struct RunReport {
  nlohmann::json manifest;
  std::vector<std::string> failures;  // assertion failures (only meaningful with --assert)
  bool passed() const noexcept { return failures.empty(); }
};

/// Executes cfg.mode and writes outputs plus manifest.json under cfg.out.
RunReport run(const RunConfig& cfg);

/// Sweeps cfg.N for the configured level set and regresses mean counts on N.
RunReport scaling_study(const RunConfig& cfg);

}  // namespace ltlab
