#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "linkstab/core_model.hpp"
#include "linkstab/probe_engine.hpp"
#include "linkstab/scenario_sim.hpp"

namespace linkstab {

struct AppConfig {
  StabilityParams params;
  std::vector<LineBinding> lines;
  std::vector<ProbeTarget> targets;
  int scale_base = 10;
  double admission_threshold = 0.90;
  std::filesystem::path log_path = "linkstab.jsonl";
  std::filesystem::path weights_path = "weights.json";
  bool verify_tls = true;
  bool record_probes = true;

  // Throws ConfigError. Checks n == lines, m == targets and everything the
  // owned types require.
  void validate() const;
};

// JSON config. `lines` and `targets` define n and m; params.lines and
// params.ticks_per_iteration may be given too but must then agree.
AppConfig parse_app_config(std::string_view json_text);
AppConfig load_app_config(const std::filesystem::path& path);

// Scenario files share the config layout, with `phases` per line in place of
// a source binding and no target list.
Scenario parse_scenario(std::string_view json_text);
Scenario load_scenario(const std::filesystem::path& path);

// Either kind of file, reduced to what a log header pins down.
struct ParameterSet {
  StabilityParams params;
  int scale_base = 10;
};
ParameterSet load_parameter_set(const std::filesystem::path& path);

}  // namespace linkstab
