#pragma once

#include <string>
#include <vector>

#include "mchn/config.hpp"
#include "mchn/io.hpp"

namespace mchn {

/// Overrides [output] dir when set.
inline constexpr const char* kOutputDirEnv = "MCHN_OUTPUT_DIR";

struct RunOptions {
  /// Worker threads for independent pieces (characteristic chunks, probe
  /// sweeps). Results do not depend on it.
  unsigned jobs = 1;
};

struct ScenarioOutcome {
  /// 0 on success (a breakdown is a recorded event, not a failure); 3 when a
  /// built-in check of the scenario fails (reduce-check).
  int exit_code = 0;
  std::string kind;
  std::vector<std::string> artifacts;
  Json summary;
};

/// "peakon-sim", "periodic-peakon-sim", "pde-sim", "breaking-check",
/// "reduce-check", "holder-probe", "characteristics".
const std::vector<std::string>& scenario_kinds();

/// Runs [scenario] kind and writes its artifacts under the output directory.
/// Throws ConfigError for invalid or unknown keys.
ScenarioOutcome run_scenario(const Config& cfg, const RunOptions& opts = {});

}  // namespace mchn
