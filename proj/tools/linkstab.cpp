// linkstab: uplink stability monitor for multi-homed gateways.

#include <atomic>
#include <csignal>
#include <iostream>

#include <CLI11.hpp>

#include "linkstab/commands.hpp"

namespace {

std::atomic<bool> g_stop{false};

extern "C" void request_stop(int) { g_stop.store(true); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Link stability measurement for multi-homed internet gateways"};
  app.set_version_flag("--version", std::string("linkstab ") + LINKSTAB_VERSION);
  app.require_subcommand(1);

  std::string config_path;
  std::int64_t iterations = 0;
  auto* run = app.add_subcommand("run", "Probe every line forever and log stability indices");
  run->add_option("--config", config_path, "JSON config file")->required();
  run->add_option("--iterations", iterations, "Stop after this many iterations (0 = run forever)")
      ->check(CLI::NonNegativeNumber);

  std::string scenario_path;
  std::string out_path;
  auto* simulate = app.add_subcommand("simulate", "Run a synthetic scenario and write its log");
  simulate->add_option("--scenario", scenario_path, "JSON scenario file")->required();
  simulate->add_option("--out", out_path, "Output JSONL log")->required();

  std::string log_path;
  std::string format = "csv";
  auto* report = app.add_subcommand("report", "Export stability percentages from a log");
  report->add_option("--log", log_path, "JSONL log")->required();
  report->add_option("--format", format, "Output format (csv)");

  std::string replay_log;
  std::string replay_config;
  auto* replay = app.add_subcommand("replay", "Recompute a log from its ticks and verify it");
  replay->add_option("--log", replay_log, "JSONL log")->required();
  replay->add_option("--config", replay_config, "Config or scenario the log must match");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? linkstab::kExitOk : linkstab::kExitUsage;
  }

  if (*run) {
    std::signal(SIGTERM, request_stop);
    std::signal(SIGINT, request_stop);
    std::optional<std::int64_t> limit;
    if (iterations > 0) limit = iterations;
    return linkstab::run_command(config_path, limit, g_stop, std::cout, std::cerr);
  }
  if (*simulate) return linkstab::simulate_command(scenario_path, out_path, std::cerr);
  if (*report) return linkstab::report_command(log_path, format, std::cout, std::cerr);
  std::optional<std::filesystem::path> cfg;
  if (!replay_config.empty()) cfg = replay_config;
  return linkstab::replay_command(replay_log, cfg, std::cout, std::cerr);
}
