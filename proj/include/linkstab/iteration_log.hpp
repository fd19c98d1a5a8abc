#pragma once

// JSONL iteration log: a header object first, then one object per
// iteration. Every record is written with a single append so a reader never
// sees half a line.

#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "linkstab/core_model.hpp"
#include "linkstab/errors.hpp"
#include "linkstab/policy_engine.hpp"
#include "linkstab/probe_engine.hpp"

namespace linkstab {

inline constexpr std::string_view kLogFormat = "linkstab-log/1";

struct LogHeader {
  int lines = 1;
  int ticks_per_iteration = 10;
  int history_depth = 10;
  int consistency_depth = 10;
  int scale_base = 10;
  std::vector<std::string> line_names;
  std::vector<int> bandwidth_factors;

  StabilityParams stability_params() const;
  bool same_parameters(const LogHeader& other) const;

  friend bool operator==(const LogHeader&, const LogHeader&) = default;
};

LogHeader make_header(const StabilityParams& params, int scale_base,
                      std::vector<std::string> line_names, std::vector<int> bandwidth_factors);

struct LineRecord {
  std::string name;
  Tick tick = 0;
  int status = 0;
  Tick historical = 0;
  double stability = 0;
  int bandwidth_factor = 1;
  int weight = 0;
  bool in_service = false;

  friend bool operator==(const LineRecord&, const LineRecord&) = default;
};

struct IterationRecord {
  Iteration iteration = 0;
  double timestamp = 0;  // seconds; unix time for live runs, simulated time otherwise
  std::vector<LineRecord> lines;
  int consistency = 0;
  double pipe_stability = 0;
  std::optional<AdmissionDecision> admission;
  std::vector<PolicyEvent> events;
  std::vector<ProbeOutcome> probes;

  friend bool operator==(const IterationRecord&, const IterationRecord&) = default;
};

IterationRecord make_record(const StabilitySnapshot& snapshot, const WeightTable& weights,
                            std::span<const std::string> line_names, double timestamp,
                            std::vector<PolicyEvent> events,
                            std::optional<AdmissionDecision> admission,
                            std::vector<ProbeOutcome> probes = {});

// Rebuilds the weight table a record was written with.
WeightTable weight_table_of(const IterationRecord& record);

std::string serialize(const LogHeader& header);
std::string serialize(const IterationRecord& record);

// A line of the log that is not valid JSON or misses required fields.
class LogFormatError : public std::runtime_error {
 public:
  LogFormatError(std::size_t line_number, const std::string& what)
      : std::runtime_error(what), line_number_(line_number) {}
  std::size_t line_number() const noexcept { return line_number_; }

 private:
  std::size_t line_number_;
};

// The log was written under different parameters than expected.
class ParameterMismatch : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

struct LogContents {
  std::optional<LogHeader> header;  // absent only for an empty file
  std::vector<IterationRecord> records;
};

// Throws LogFormatError naming the 1-based line of the first bad record and
// ParameterMismatch when a later header disagrees with the first one.
LogContents parse_log(std::string_view text);
LogContents read_log(const std::filesystem::path& path);

// Append-only writer. Each call issues one write(2) of a complete line and
// syncs it to disk.
class LogWriter {
 public:
  // Throws std::system_error if the file cannot be opened for appending.
  explicit LogWriter(const std::filesystem::path& path, bool truncate = false);
  ~LogWriter();

  LogWriter(const LogWriter&) = delete;
  LogWriter& operator=(const LogWriter&) = delete;

  void append(std::string_view line);

 private:
  int fd_ = -1;
};

// Drops an unterminated trailing line left by an interrupted writer.
// Returns true if the file was shortened.
bool trim_partial_tail(const std::filesystem::path& path);

// Writes the weight table as a JSON object keyed by line name, replacing the
// file atomically (temp file + rename).
void write_weight_file(const std::filesystem::path& path, const WeightTable& table,
                       const StabilitySnapshot& snapshot, std::span<const std::string> line_names);

}  // namespace linkstab
