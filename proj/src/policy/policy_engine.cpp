#include "linkstab/policy_engine.hpp"

#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "linkstab/errors.hpp"

namespace linkstab {

std::vector<int> bandwidth_factors(std::span<const double> bandwidths_mbps, int scale_base) {
  if (bandwidths_mbps.empty()) throw ConfigError("no bandwidths given");
  if (scale_base < 1) throw ConfigError(fmt::format("scale_base must be >= 1, got {}", scale_base));
  long double total = 0;
  for (double bw : bandwidths_mbps) {
    if (!(bw > 0) || !std::isfinite(bw))
      throw ConfigError(fmt::format("bandwidth must be a positive number, got {}", bw));
    total += bw;
  }

  std::vector<int> factors;
  factors.reserve(bandwidths_mbps.size());
  for (double bw : bandwidths_mbps) {
    const long double scaled = static_cast<long double>(scale_base) * bw / total;
    // Snap float noise so that an exact integer share does not round up.
    const long double nearest = std::round(scaled);
    const long double value =
        std::fabs(scaled - nearest) <= 1e-9L * std::max(1.0L, scaled) ? nearest : std::ceil(scaled);
    factors.push_back(std::max(1, static_cast<int>(value)));
  }
  return factors;
}

std::string_view to_string(WeightTier tier) {
  switch (tier) {
    case WeightTier::out_of_service: return "out-of-service";
    case WeightTier::third: return "third";
    case WeightTier::half: return "half";
    case WeightTier::full: return "full";
  }
  return "out-of-service";
}

WeightTier weight_tier(double stability) {
  if (stability >= kFullWeightStability) return WeightTier::full;
  if (stability >= kHalfWeightStability) return WeightTier::half;
  if (stability > 0) return WeightTier::third;
  return WeightTier::out_of_service;
}

namespace {

// round(value / divisor) with halves going up, never below 1.
int divided_weight(int value, int divisor) {
  return std::max(1, (2 * value + divisor) / (2 * divisor));
}

}  // namespace

int routing_weight(double stability, int bandwidth_factor) {
  switch (weight_tier(stability)) {
    case WeightTier::full: return bandwidth_factor;
    case WeightTier::half: return divided_weight(bandwidth_factor, 2);
    case WeightTier::third: return divided_weight(bandwidth_factor, 3);
    case WeightTier::out_of_service: return 0;
  }
  return 0;
}

std::string_view to_string(EventKind kind) {
  switch (kind) {
    case EventKind::line_removed: return "line-removed";
    case EventKind::line_restored: return "line-restored";
    case EventKind::tier_changed: return "tier-changed";
    case EventKind::admission_granted: return "admission-granted";
    case EventKind::admission_denied: return "admission-denied";
  }
  return "tier-changed";
}

std::optional<EventKind> event_kind_from_string(std::string_view text) {
  for (auto kind : {EventKind::line_removed, EventKind::line_restored, EventKind::tier_changed,
                    EventKind::admission_granted, EventKind::admission_denied}) {
    if (to_string(kind) == text) return kind;
  }
  return std::nullopt;
}

WeightUpdate build_weight_table(const StabilitySnapshot& snapshot,
                                std::span<const int> bandwidth_factors,
                                const WeightTable* previous) {
  if (snapshot.lines.size() != bandwidth_factors.size())
    throw DomainError(fmt::format("snapshot has {} lines but {} bandwidth factors",
                                  snapshot.lines.size(), bandwidth_factors.size()));
  if (previous != nullptr && previous->lines.size() != snapshot.lines.size())
    throw DomainError("previous weight table has a different number of lines");
  for (int bwf : bandwidth_factors)
    if (bwf < 1) throw DomainError(fmt::format("bandwidth factor must be >= 1, got {}", bwf));

  WeightUpdate update;
  update.table.iteration = snapshot.iteration;
  update.table.lines.reserve(snapshot.lines.size());

  for (std::size_t i = 0; i < snapshot.lines.size(); ++i) {
    const double s = snapshot.lines[i].stability;
    LineWeight lw;
    lw.bandwidth_factor = bandwidth_factors[i];
    lw.tier = weight_tier(s);
    lw.weight = routing_weight(s, lw.bandwidth_factor);
    lw.in_service = lw.weight > 0;
    update.table.lines.push_back(lw);

    if (previous == nullptr) continue;
    const LineWeight& before = previous->lines[i];
    const int id = static_cast<int>(i) + 1;
    if (before.in_service && !lw.in_service) {
      update.events.push_back({EventKind::line_removed, id, snapshot.iteration,
                               fmt::format("S={} tick={}", s, snapshot.lines[i].tick)});
    } else if (!before.in_service && lw.in_service) {
      update.events.push_back({EventKind::line_restored, id, snapshot.iteration,
                               fmt::format("S={} weight={}", s, lw.weight)});
    } else if (before.tier != lw.tier) {
      update.events.push_back({EventKind::tier_changed, id, snapshot.iteration,
                               fmt::format("{} -> {} (S={} weight={})", to_string(before.tier),
                                           to_string(lw.tier), s, lw.weight)});
    }
  }
  return update;
}

AdmissionDecision admission_decision(const StabilitySnapshot& snapshot, double threshold) {
  if (!(threshold >= 0 && threshold <= 1))
    throw DomainError(fmt::format("admission threshold {} outside [0,1]", threshold));
  AdmissionDecision decision;
  decision.grant = snapshot.pipe_stability >= threshold;
  double best = -1;
  for (std::size_t i = 0; i < snapshot.lines.size(); ++i) {
    if (snapshot.lines[i].stability > best) {
      best = snapshot.lines[i].stability;
      decision.best_line = static_cast<int>(i) + 1;
    }
  }
  return decision;
}

std::optional<PolicyEvent> admission_event(const AdmissionDecision& decision,
                                           const std::optional<AdmissionDecision>& previous,
                                           Iteration iteration) {
  if (!previous || previous->grant == decision.grant) return std::nullopt;
  return PolicyEvent{decision.grant ? EventKind::admission_granted : EventKind::admission_denied,
                     decision.best_line, iteration,
                     fmt::format("best line {}", decision.best_line)};
}

}  // namespace linkstab
