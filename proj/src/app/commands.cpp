#include "linkstab/commands.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "linkstab/app_config.hpp"
#include "linkstab/errors.hpp"
#include "linkstab/iteration_log.hpp"
#include "linkstab/log_verifier.hpp"
#include "linkstab/measurement_loop.hpp"
#include "linkstab/report.hpp"
#include "linkstab/scenario_sim.hpp"

namespace linkstab {

namespace {

std::string summary(const IterationRecord& record) {
  std::string text = fmt::format("iteration {} C={} IS={}", record.iteration, record.consistency,
                                 format_percent(record.pipe_stability));
  for (const auto& line : record.lines)
    text += fmt::format(" | {} tick={} S={} Rw={}", line.name, line.tick,
                        format_percent(line.stability), line.weight);
  for (const auto& event : record.events)
    text += fmt::format(" [{}{}]", to_string(event.kind),
                        event.line ? fmt::format(" line {}", *event.line) : std::string{});
  return text;
}

}  // namespace

int run_command(const std::filesystem::path& config_path, std::optional<Iteration> iterations,
                const std::atomic<bool>& stop, std::ostream& out, std::ostream& err) {
  AppConfig config;
  try {
    config = load_app_config(config_path);
  } catch (const ConfigError& e) {
    fmt::print(err, "config error: {}\n", e.what());
    return kExitUsage;
  }

  CurlTransport transport(config.verify_tls);
  MeasurementLoop loop(config, transport);
  try {
    loop.open();
  } catch (const ParameterMismatch& e) {
    fmt::print(err, "parameter mismatch: {}\n", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    fmt::print(err, "cannot start: {}\n", e.what());
    return kExitFailure;
  }

  try {
    loop.run(stop, iterations, [&out](const IterationRecord& record) {
      fmt::print(out, "{}\n", summary(record));
      out.flush();
    });
  } catch (const std::exception& e) {
    fmt::print(err, "measurement loop failed: {}\n", e.what());
    return kExitFailure;
  }
  return kExitOk;
}

int simulate_command(const std::filesystem::path& scenario_path,
                     const std::filesystem::path& output_path, std::ostream& err) {
  Scenario scenario;
  try {
    scenario = load_scenario(scenario_path);
  } catch (const ConfigError& e) {
    fmt::print(err, "scenario error: {}\n", e.what());
    return kExitUsage;
  }

  try {
    const SimulationResult result = simulate(scenario);
    std::vector<std::string> names;
    for (const auto& line : scenario.line_bindings()) names.push_back(line.name);

    LogWriter writer(output_path, /*truncate=*/true);
    writer.append(serialize(
        make_header(scenario.params, scenario.scale_base, names, result.bandwidth_factors)));
    for (const auto& step : result.steps) {
      const double timestamp =
          static_cast<double>(step.snapshot.iteration) * scenario.params.interval.count();
      writer.append(serialize(make_record(step.snapshot, step.weights, names, timestamp,
                                          step.events, step.admission)));
    }
  } catch (const std::exception& e) {
    fmt::print(err, "simulation failed: {}\n", e.what());
    return kExitFailure;
  }
  return kExitOk;
}

int report_command(const std::filesystem::path& log_path, const std::string& format,
                   std::ostream& out, std::ostream& err) {
  if (format != "csv") {
    fmt::print(err, "unsupported report format '{}' (only csv)\n", format);
    return kExitUsage;
  }
  try {
    write_csv_report(read_log(log_path), out);
  } catch (const LogFormatError& e) {
    fmt::print(err, "{}: {}\n", log_path.string(), e.what());
    return kExitFailure;
  } catch (const std::exception& e) {
    fmt::print(err, "report failed: {}\n", e.what());
    return kExitFailure;
  }
  return kExitOk;
}

int replay_command(const std::filesystem::path& log_path,
                   const std::optional<std::filesystem::path>& config_path, std::ostream& out,
                   std::ostream& err) {
  std::optional<LogHeader> expected;
  if (config_path) {
    try {
      const ParameterSet set = load_parameter_set(*config_path);
      expected = make_header(set.params, set.scale_base, {}, {});
    } catch (const ConfigError& e) {
      fmt::print(err, "config error: {}\n", e.what());
      return kExitUsage;
    }
  }

  try {
    const LogContents log = read_log(log_path);
    const VerifyResult verdict = verify_log(log, expected ? &*expected : nullptr);
    if (!verdict.ok) {
      fmt::print(err, "divergence at iteration {}: {}\n", verdict.first_divergence.value_or(0),
                 verdict.message);
      return kExitFailure;
    }
    fmt::print(out, "ok: {}\n", verdict.message);
  } catch (const ParameterMismatch& e) {
    fmt::print(err, "parameter mismatch: {}\n", e.what());
    return kExitFailure;
  } catch (const std::exception& e) {
    fmt::print(err, "replay failed: {}\n", e.what());
    return kExitFailure;
  }
  return kExitOk;
}

}  // namespace linkstab
