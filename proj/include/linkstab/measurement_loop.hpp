#pragma once

#include <atomic>
#include <functional>
#include <optional>

#include "linkstab/app_config.hpp"
#include "linkstab/iteration_log.hpp"

namespace linkstab {

// The operational loop: probe every line, step the stability model, derive
// weights, append one log record and rewrite the weight file.
//
// An existing log is resumed: its header must match the config and its
// ticks are replayed so the history carries on where it stopped.
class MeasurementLoop {
 public:
  using Clock = std::function<double()>;  // unix seconds
  using Observer = std::function<void(const IterationRecord&)>;

  MeasurementLoop(AppConfig config, ProbeTransport& transport, Clock clock = {});

  // Opens or resumes the log. Throws ParameterMismatch, LogFormatError,
  // ConfigError or std::system_error; nothing is written on failure.
  void open();

  // One full iteration. Requires open().
  IterationRecord run_once();

  // Runs until `stop` is set or `max_iterations` more records were written.
  // An iteration in progress when `stop` flips is completed and persisted.
  void run(const std::atomic<bool>& stop, std::optional<Iteration> max_iterations = std::nullopt,
           const Observer& observer = {});

  Iteration iterations() const noexcept { return tracker_.iterations(); }

 private:
  AppConfig config_;
  ProbeTransport& transport_;
  Clock clock_;
  std::vector<std::string> names_;
  std::vector<int> bandwidth_factors_;
  StabilityTracker tracker_;
  std::optional<WeightTable> previous_weights_;
  std::optional<AdmissionDecision> previous_admission_;
  std::optional<LogWriter> writer_;
};

}  // namespace linkstab
