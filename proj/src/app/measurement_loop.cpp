#include "linkstab/measurement_loop.hpp"

#include <chrono>
#include <thread>

#include <fmt/format.h>

namespace linkstab {

namespace {

double unix_now() {
  return std::chrono::duration<double>(std::chrono::system_clock::now().time_since_epoch()).count();
}

std::vector<double> bandwidths_of(const AppConfig& config) {
  std::vector<double> out;
  for (const auto& line : config.lines) out.push_back(line.bandwidth_mbps);
  return out;
}

}  // namespace

MeasurementLoop::MeasurementLoop(AppConfig config, ProbeTransport& transport, Clock clock)
    : config_((config.validate(), std::move(config))),
      transport_(transport),
      clock_(clock ? std::move(clock) : Clock(unix_now)),
      bandwidth_factors_(bandwidth_factors(bandwidths_of(config_), config_.scale_base)),
      tracker_(config_.params) {
  for (const auto& line : config_.lines) names_.push_back(line.name);
}

void MeasurementLoop::open() {
  const auto& path = config_.log_path;
  const LogHeader expected =
      make_header(config_.params, config_.scale_base, names_, bandwidth_factors_);

  std::error_code ec;
  const bool resume = std::filesystem::exists(path, ec) && std::filesystem::file_size(path, ec) > 0;
  if (resume) {
    trim_partial_tail(path);
    const LogContents existing = read_log(path);
    if (existing.header) {
      if (!existing.header->same_parameters(expected) || existing.header->line_names != names_)
        throw ParameterMismatch(fmt::format(
            "log '{}' was written with n={} m={} k={} z={} scale_base={}; config has n={} m={} "
            "k={} z={} scale_base={}",
            path.string(), existing.header->lines, existing.header->ticks_per_iteration,
            existing.header->history_depth, existing.header->consistency_depth,
            existing.header->scale_base, expected.lines, expected.ticks_per_iteration,
            expected.history_depth, expected.consistency_depth, expected.scale_base));
    }
    Iteration next = 1;
    for (const auto& record : existing.records) {
      if (record.iteration != next)
        throw ReplayError(next, fmt::format("log '{}' skips from iteration {} to {}", path.string(),
                                            next - 1, record.iteration));
      std::vector<Tick> ticks;
      for (const auto& line : record.lines) ticks.push_back(line.tick);
      tracker_.step(ticks);
      ++next;
    }
    if (!existing.records.empty()) {
      previous_weights_ = weight_table_of(existing.records.back());
      previous_admission_ = existing.records.back().admission;
    }
    writer_.emplace(path);
    if (!existing.header) writer_->append(serialize(expected));
  } else {
    writer_.emplace(path);
    writer_->append(serialize(expected));
  }
}

IterationRecord MeasurementLoop::run_once() {
  if (!writer_) throw std::logic_error("MeasurementLoop::open() not called");

  ProbeIteration probes =
      probe_iteration(transport_, config_.lines, config_.targets, config_.params.timeout);
  const double timestamp = clock_();
  const StabilitySnapshot snapshot = tracker_.step(probes.ticks);

  WeightUpdate update = build_weight_table(
      snapshot, bandwidth_factors_, previous_weights_ ? &*previous_weights_ : nullptr);
  const AdmissionDecision admission = admission_decision(snapshot, config_.admission_threshold);
  if (auto event = admission_event(admission, previous_admission_, snapshot.iteration))
    update.events.push_back(std::move(*event));

  IterationRecord record =
      make_record(snapshot, update.table, names_, timestamp, std::move(update.events), admission,
                  config_.record_probes ? std::move(probes.outcomes) : std::vector<ProbeOutcome>{});
  writer_->append(serialize(record));
  write_weight_file(config_.weights_path, update.table, snapshot, names_);

  previous_weights_ = std::move(update.table);
  previous_admission_ = admission;
  return record;
}

void MeasurementLoop::run(const std::atomic<bool>& stop, std::optional<Iteration> max_iterations,
                          const Observer& observer) {
  using clock = std::chrono::steady_clock;
  const auto interval = std::chrono::duration_cast<clock::duration>(config_.params.interval);
  auto next = clock::now();
  Iteration done = 0;
  while (!stop.load() && (!max_iterations || done < *max_iterations)) {
    const IterationRecord record = run_once();
    ++done;
    if (observer) observer(record);
    if (max_iterations && done >= *max_iterations) break;

    next += interval;
    if (next < clock::now()) next = clock::now();
    while (!stop.load()) {
      const auto now = clock::now();
      if (now >= next) break;
      std::this_thread::sleep_for(std::min<clock::duration>(next - now, std::chrono::milliseconds(100)));
    }
  }
}

}  // namespace linkstab
