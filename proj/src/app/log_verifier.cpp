#include "linkstab/log_verifier.hpp"

#include <fmt/format.h>

#include "linkstab/scenario_sim.hpp"

namespace linkstab {

namespace {

std::optional<std::string> compare(const IterationRecord& logged, const StabilitySnapshot& derived,
                                   const LogHeader& header) {
  if (logged.consistency != derived.consistency)
    return fmt::format("C logged {} derived {}", logged.consistency, derived.consistency);
  if (logged.pipe_stability != derived.pipe_stability)
    return fmt::format("IS logged {} derived {}", logged.pipe_stability, derived.pipe_stability);
  for (std::size_t i = 0; i < derived.lines.size(); ++i) {
    const auto& l = logged.lines[i];
    const auto& d = derived.lines[i];
    const auto id = i + 1;
    if (l.status != d.status) return fmt::format("line {} L logged {} derived {}", id, l.status, d.status);
    if (l.historical != d.historical)
      return fmt::format("line {} H logged {} derived {}", id, l.historical, d.historical);
    if (l.stability != d.stability)
      return fmt::format("line {} S logged {} derived {}", id, l.stability, d.stability);
    if (i < header.bandwidth_factors.size() && l.bandwidth_factor != header.bandwidth_factors[i])
      return fmt::format("line {} Bwf logged {} header {}", id, l.bandwidth_factor,
                         header.bandwidth_factors[i]);
    const int weight = routing_weight(d.stability, l.bandwidth_factor);
    if (l.weight != weight) return fmt::format("line {} Rw logged {} derived {}", id, l.weight, weight);
    if (l.in_service != (weight > 0))
      return fmt::format("line {} in_service flag inconsistent with Rw {}", id, weight);
  }
  return std::nullopt;
}

}  // namespace

VerifyResult verify_log(const LogContents& log, const LogHeader* expected) {
  VerifyResult result;
  if (!log.header) {
    result.message = "empty log";
    return result;
  }
  const LogHeader& header = *log.header;
  if (expected != nullptr && !header.same_parameters(*expected))
    throw ParameterMismatch(fmt::format(
        "log header has n={} m={} k={} z={} scale_base={}, expected n={} m={} k={} z={} "
        "scale_base={}",
        header.lines, header.ticks_per_iteration, header.history_depth, header.consistency_depth,
        header.scale_base, expected->lines, expected->ticks_per_iteration, expected->history_depth,
        expected->consistency_depth, expected->scale_base));
  const StabilityParams params = header.stability_params();
  params.validate();

  std::vector<TickRecord> ticks;
  ticks.reserve(log.records.size());
  for (const auto& record : log.records) {
    TickRecord t{record.iteration, {}};
    for (const auto& line : record.lines) t.ticks.push_back(line.tick);
    ticks.push_back(std::move(t));
  }

  // Replay the longest clean prefix so a tampered value before a gap or a
  // malformed tick is still reported first.
  std::vector<StabilitySnapshot> derived;
  std::optional<ReplayError> replay_failure;
  std::size_t usable = ticks.size();
  for (;;) {
    try {
      derived = replay(std::span(ticks).first(usable), params);
      break;
    } catch (const ReplayError& e) {
      if (!replay_failure) replay_failure = e;
      usable = static_cast<std::size_t>(std::max<Iteration>(0, e.iteration() - 1));
      if (usable > ticks.size()) usable = ticks.size();
    }
  }

  for (std::size_t p = 0; p < derived.size(); ++p) {
    if (auto diff = compare(log.records[p], derived[p], header)) {
      result.ok = false;
      result.first_divergence = log.records[p].iteration;
      result.message = fmt::format("iteration {}: {}", log.records[p].iteration, *diff);
      return result;
    }
  }
  if (replay_failure) {
    result.ok = false;
    result.first_divergence = replay_failure->iteration();
    result.message = fmt::format("iteration {}: {}", replay_failure->iteration(), replay_failure->what());
    return result;
  }
  result.message = fmt::format("{} iterations verified", derived.size());
  return result;
}

}  // namespace linkstab
