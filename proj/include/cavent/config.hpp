#pragma once

#include <string>
#include <vector>

#include "cavent/model.hpp"

namespace cavent::config {

// Runtime settings layered as: defaults < CAVENT_OUT_DIR < config file < --set.
// g1 is the unit and not a key; every energy is entered in multiples of g1.
// t_max = 0 and an unset n_max mean "scenario default".
struct Config {
  model::ModelParams params;
  bool omega_drive_set = false;  // unset: resolved to omega (frame = drive)
  bool n_max_set = false;
  double rtol = 1e-9;
  double atol = 1e-12;
  double t_max = 0.0;
  int sample_count = 2000;
  std::string out_dir = ".";
  unsigned long seed = 12345;  // randomized self-checks only, never physics
  int threads = 1;
  double r_min = 0.05, r_max = 1.0, r_step = 0.01;
  double d_min = 0.005, d_max = 0.2, d_step = 0.005;
  std::vector<std::string> set_pairs;  // verbatim overrides, echoed in headers
  // every applied (key, value) in order, so scenario defaults can be layered
  // underneath and the user's intent replayed on top
  std::vector<std::pair<std::string, std::string>> overrides;

  // "key=value" override; records the pair verbatim.  UsageError on unknown
  // keys or unparsable values.
  void apply_pair(const std::string& pair);
  void apply(const std::string& key, const std::string& value);

  // plain key=value lines, '#' comments; UsageError if unreadable
  void load_file(const std::string& path);

  // copy of params with the drive frame defaulted to the cavity frequency
  model::ModelParams resolved_params() const;

  // header lines for datasets: every resolved setting as key=value
  std::vector<std::pair<std::string, std::string>> resolved_entries() const;
};

}  // namespace cavent::config
