#pragma once

#include <string>
#include <vector>

#include "cavent/config.hpp"

namespace cavent::experiments {

inline constexpr const char* kArtifactVersion = "0.1.0";

struct UnknownScenario : UsageError {
  using UsageError::UsageError;
};

struct ScenarioInfo {
  std::string name;
  std::string description;
};

// Registry of runnable scenarios, sorted by name.
const std::vector<ScenarioInfo>& list_scenarios();

// Runs one scenario and returns the paths of the CSV files it wrote.
//
// Each scenario starts from its own parameter defaults and then replays the
// user's overrides (config file entries, then --set pairs) on top, so an
// explicit setting always wins. Files carry a '#'-commented header with the
// fully resolved configuration of the dataset, land under cfg.out_dir, and
// are written atomically (temp file + rename). Reruns with the same
// configuration produce byte-identical output regardless of cfg.threads.
std::vector<std::string> run_scenario(const std::string& name,
                                      const config::Config& cfg);

}  // namespace cavent::experiments
