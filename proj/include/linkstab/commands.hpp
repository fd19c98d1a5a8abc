#pragma once

#include <atomic>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>

#include "linkstab/core_model.hpp"

namespace linkstab {

// Exit codes shared by all subcommands.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

int run_command(const std::filesystem::path& config_path, std::optional<Iteration> iterations,
                const std::atomic<bool>& stop, std::ostream& out, std::ostream& err);

int simulate_command(const std::filesystem::path& scenario_path,
                     const std::filesystem::path& output_path, std::ostream& err);

int report_command(const std::filesystem::path& log_path, const std::string& format,
                   std::ostream& out, std::ostream& err);

int replay_command(const std::filesystem::path& log_path,
                   const std::optional<std::filesystem::path>& config_path, std::ostream& out,
                   std::ostream& err);

}  // namespace linkstab
