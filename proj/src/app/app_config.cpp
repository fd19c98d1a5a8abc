#include "linkstab/app_config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "linkstab/errors.hpp"

namespace linkstab {

using nlohmann::json;

namespace {

json parse_json(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(fmt::format("invalid JSON: {}", e.what()));
  }
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(fmt::format("cannot read '{}'", path.string()));
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

template <typename T>
T value_or(const json& object, const char* key, T fallback) {
  if (!object.contains(key)) return fallback;
  try {
    return object.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(fmt::format("field '{}' has the wrong type", key));
  }
}

// Reads the "params" block. n and m come from elsewhere and are only checked
// here when stated explicitly.
StabilityParams read_params(const json& root, int lines, int ticks_per_iteration) {
  const json params = root.value("params", json::object());
  if (!params.is_object()) throw ConfigError("'params' must be an object");

  StabilityParams out;
  out.lines = lines;
  out.ticks_per_iteration = ticks_per_iteration;
  out.history_depth = value_or(params, "history_depth", 10);
  out.consistency_depth = value_or(params, "consistency_depth", 10);
  out.interval = Seconds(value_or(params, "interval_s", 60.0));
  out.timeout = Seconds(value_or(params, "timeout_s", 5.0));

  if (params.contains("lines") && value_or(params, "lines", 0) != lines)
    throw ConfigError(fmt::format("params.lines = {} but {} lines are configured",
                                  params.at("lines").dump(), lines));
  if (params.contains("ticks_per_iteration") &&
      value_or(params, "ticks_per_iteration", 0) != ticks_per_iteration)
    throw ConfigError(fmt::format("params.ticks_per_iteration = {} but m = {}",
                                  params.at("ticks_per_iteration").dump(), ticks_per_iteration));
  return out;
}

const json& require_array(const json& root, const char* key) {
  if (!root.contains(key) || !root.at(key).is_array() || root.at(key).empty())
    throw ConfigError(fmt::format("'{}' must be a non-empty array", key));
  return root.at(key);
}

}  // namespace

void AppConfig::validate() const {
  params.validate();
  if (static_cast<std::size_t>(params.lines) != lines.size())
    throw ConfigError(fmt::format("n = {} but {} lines configured", params.lines, lines.size()));
  if (static_cast<std::size_t>(params.ticks_per_iteration) != targets.size())
    throw ConfigError(fmt::format("m = {} but {} targets configured", params.ticks_per_iteration,
                                  targets.size()));
  std::set<std::string> names;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto& line = lines[i];
    if (line.id != static_cast<int>(i) + 1)
      throw ConfigError(fmt::format("line '{}' has id {}, expected {}", line.name, line.id, i + 1));
    if (line.name.empty() || !names.insert(line.name).second)
      throw ConfigError(fmt::format("line names must be unique and non-empty ('{}')", line.name));
    if (!(line.bandwidth_mbps > 0))
      throw ConfigError(fmt::format("line '{}': bandwidth must be > 0", line.name));
  }
  std::set<std::string> labels;
  for (const auto& target : targets) {
    target.validate();
    if (target.label.empty() || !labels.insert(target.label).second)
      throw ConfigError(fmt::format("target labels must be unique and non-empty ('{}')", target.label));
  }
  if (scale_base < 1) throw ConfigError(fmt::format("scale_base must be >= 1, got {}", scale_base));
  if (!(admission_threshold >= 0 && admission_threshold <= 1))
    throw ConfigError(fmt::format("admission_threshold {} outside [0,1]", admission_threshold));
  if (log_path.empty()) throw ConfigError("log_path must be set");
}

AppConfig parse_app_config(std::string_view json_text) {
  const json root = parse_json(json_text);
  if (!root.is_object()) throw ConfigError("config must be a JSON object");

  AppConfig cfg;
  const json& lines = require_array(root, "lines");
  const json& targets = require_array(root, "targets");

  int id = 1;
  for (const auto& entry : lines) {
    if (!entry.is_object()) throw ConfigError("each line must be an object");
    LineBinding line;
    line.id = id++;
    line.name = value_or<std::string>(entry, "name", fmt::format("line-{}", line.id));
    if (entry.contains("source") && !entry.at("source").is_null())
      line.source = value_or<std::string>(entry, "source", "");
    line.bandwidth_mbps = value_or(entry, "bandwidth_mbps", 0.0);
    cfg.lines.push_back(std::move(line));
  }
  for (const auto& entry : targets) {
    if (!entry.is_object()) throw ConfigError("each target must be an object");
    ProbeTarget target;
    target.url = value_or<std::string>(entry, "url", "");
    target.label = value_or<std::string>(entry, "label", target.url);
    cfg.targets.push_back(std::move(target));
  }

  cfg.params = read_params(root, static_cast<int>(cfg.lines.size()),
                           static_cast<int>(cfg.targets.size()));
  cfg.scale_base = value_or(root, "scale_base", 10);
  cfg.admission_threshold = value_or(root, "admission_threshold", 0.90);
  cfg.log_path = value_or<std::string>(root, "log_path", "linkstab.jsonl");
  const auto default_weights = (cfg.log_path.parent_path() / "weights.json").string();
  cfg.weights_path = value_or<std::string>(root, "weights_path", default_weights);
  cfg.verify_tls = value_or(root, "verify_tls", true);
  cfg.record_probes = value_or(root, "record_probes", true);
  cfg.validate();
  return cfg;
}

AppConfig load_app_config(const std::filesystem::path& path) {
  return parse_app_config(slurp(path));
}

Scenario parse_scenario(std::string_view json_text) {
  const json root = parse_json(json_text);
  if (!root.is_object()) throw ConfigError("scenario must be a JSON object");

  Scenario scenario;
  for (const auto& entry : require_array(root, "lines")) {
    if (!entry.is_object()) throw ConfigError("each line must be an object");
    LinkModel model;
    model.name = value_or<std::string>(entry, "name", fmt::format("line-{}", scenario.models.size() + 1));
    model.bandwidth_mbps = value_or(entry, "bandwidth_mbps", 1.0);
    for (const auto& phase_json : require_array(entry, "phases")) {
      if (!phase_json.is_object()) throw ConfigError("each phase must be an object");
      LinkPhase phase;
      phase.duration = value_or(phase_json, "duration", 0);
      const bool has_tick = phase_json.contains("tick");
      const bool has_probability = phase_json.contains("probability");
      if (has_tick == has_probability)
        throw ConfigError(fmt::format(
            "link '{}': each phase needs exactly one of 'tick' or 'probability'", model.name));
      if (has_tick)
        phase.behavior = FixedTickPhase{value_or(phase_json, "tick", 0)};
      else
        phase.behavior = BernoulliPhase{value_or(phase_json, "probability", 0.0)};
      model.phases.push_back(phase);
    }
    scenario.models.push_back(std::move(model));
  }

  const json params = root.value("params", json::object());
  const int m = params.is_object() ? value_or(params, "ticks_per_iteration", 10) : 10;
  scenario.params = read_params(root, static_cast<int>(scenario.models.size()), m);
  scenario.seed = value_or<std::uint64_t>(root, "seed", 0);
  scenario.length = value_or<Iteration>(root, "length", 0);
  scenario.scale_base = value_or(root, "scale_base", 10);
  scenario.admission_threshold = value_or(root, "admission_threshold", 0.90);
  scenario.validate();
  return scenario;
}

Scenario load_scenario(const std::filesystem::path& path) { return parse_scenario(slurp(path)); }

ParameterSet load_parameter_set(const std::filesystem::path& path) {
  const std::string text = slurp(path);
  const json root = parse_json(text);
  if (root.is_object() && root.contains("targets")) {
    const AppConfig cfg = parse_app_config(text);
    return {cfg.params, cfg.scale_base};
  }
  const Scenario scenario = parse_scenario(text);
  return {scenario.params, scenario.scale_base};
}

}  // namespace linkstab
