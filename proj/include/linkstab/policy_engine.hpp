#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "linkstab/core_model.hpp"

namespace linkstab {

// Stability thresholds of the weight tiers. Intervals are closed below.
inline constexpr double kFullWeightStability = 0.95;
inline constexpr double kHalfWeightStability = 0.90;

// Static bandwidth factor per line: ceil(scale_base * bw_i / sum(bw)), >= 1.
// Throws ConfigError on a non-positive bandwidth or scale_base.
std::vector<int> bandwidth_factors(std::span<const double> bandwidths_mbps, int scale_base);

enum class WeightTier { out_of_service, third, half, full };

std::string_view to_string(WeightTier tier);
WeightTier weight_tier(double stability);

// Weighted-round-robin weight for one line:
//   S >= 0.95        -> bwf
//   0.90 <= S < 0.95 -> round(bwf / 2), at least 1
//   0 < S < 0.90     -> round(bwf / 3), at least 1
//   S == 0           -> 0
int routing_weight(double stability, int bandwidth_factor);

struct LineWeight {
  int bandwidth_factor = 1;
  int weight = 0;
  bool in_service = false;
  WeightTier tier = WeightTier::out_of_service;

  friend bool operator==(const LineWeight&, const LineWeight&) = default;
};

struct WeightTable {
  Iteration iteration = 0;
  std::vector<LineWeight> lines;

  friend bool operator==(const WeightTable&, const WeightTable&) = default;
};

enum class EventKind { line_removed, line_restored, tier_changed, admission_granted, admission_denied };

std::string_view to_string(EventKind kind);
std::optional<EventKind> event_kind_from_string(std::string_view text);

struct PolicyEvent {
  EventKind kind = EventKind::tier_changed;
  std::optional<int> line;  // 1-based line id
  Iteration iteration = 0;
  std::string detail;

  friend bool operator==(const PolicyEvent&, const PolicyEvent&) = default;
};

struct WeightUpdate {
  WeightTable table;
  std::vector<PolicyEvent> events;
};

// Applies the tier rule per line and diffs against `previous`: a line leaving
// service gives line-removed, coming back gives line-restored, and a tier move
// while staying in service gives tier-changed. No events without `previous`.
// Throws DomainError if the snapshot and factors disagree on n.
WeightUpdate build_weight_table(const StabilitySnapshot& snapshot,
                                std::span<const int> bandwidth_factors,
                                const WeightTable* previous = nullptr);

struct AdmissionDecision {
  bool grant = false;
  int best_line = 1;  // 1-based, lowest id wins ties

  friend bool operator==(const AdmissionDecision&, const AdmissionDecision&) = default;
};

// Advice for critical connections (VPN and the like): grant when the pipe
// stability reaches `threshold`, and point at the most stable line.
AdmissionDecision admission_decision(const StabilitySnapshot& snapshot, double threshold);

// Event for a change of the grant flag; nothing on the first decision.
std::optional<PolicyEvent> admission_event(const AdmissionDecision& decision,
                                           const std::optional<AdmissionDecision>& previous,
                                           Iteration iteration);

}  // namespace linkstab
