#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "linkstab/core_model.hpp"
#include "linkstab/policy_engine.hpp"
#include "linkstab/probe_engine.hpp"

namespace linkstab {

// Each target answers independently with this probability.
struct BernoulliPhase {
  double success_probability = 1.0;
};

// Exactly `tick` targets answer, every iteration.
struct FixedTickPhase {
  Tick tick = 0;
};

struct LinkPhase {
  int duration = 1;  // iterations
  std::variant<BernoulliPhase, FixedTickPhase> behavior;
};

struct LinkModel {
  std::string name;
  double bandwidth_mbps = 1.0;
  std::vector<LinkPhase> phases;

  // Phase active at `iteration` (1-based); the last phase repeats forever.
  const LinkPhase& phase_at(Iteration iteration) const;
};

struct Scenario {
  StabilityParams params;
  std::vector<LinkModel> models;
  std::uint64_t seed = 0;
  Iteration length = 0;
  int scale_base = 10;
  double admission_threshold = 0.90;

  // Throws ConfigError describing the first violated constraint.
  void validate() const;

  std::vector<LineBinding> line_bindings() const;
  std::vector<ProbeTarget> targets() const;
  std::vector<double> bandwidths() const;
};

// Synthetic transport answering from the scenario's link models. The verdict
// for (iteration, line, target) is a pure function of the seed and that
// triple, so evaluation order never matters.
class SimulatedTransport : public ProbeTransport {
 public:
  explicit SimulatedTransport(const Scenario& scenario);

  void begin_iteration(Iteration iteration) noexcept { iteration_ = iteration; }

  ProbeOutcome probe(const LineBinding& line, const ProbeTarget& target,
                     Seconds timeout) override;
  bool blocking() const override { return false; }

  // Uniform [0,1) draw for one probe; exposed for tests.
  static double uniform(std::uint64_t seed, Iteration iteration, int line, int target);

 private:
  const Scenario& scenario_;
  Iteration iteration_ = 1;
};

struct SimulationStep {
  StabilitySnapshot snapshot;
  WeightTable weights;
  std::vector<PolicyEvent> events;
  AdmissionDecision admission;
};

struct SimulationResult {
  std::vector<int> bandwidth_factors;
  std::vector<SimulationStep> steps;

  std::vector<std::vector<Tick>> ticks() const;
};

// Runs scenario.length iterations of probe -> step -> weight table.
// Identical scenarios give bit-identical results.
SimulationResult simulate(const Scenario& scenario);

struct TickRecord {
  Iteration iteration = 0;
  std::vector<Tick> ticks;
};

// Re-derives snapshots from persisted ticks. Iterations must run 1, 2, 3...
// Throws ReplayError naming the iteration of a gap or malformed record.
std::vector<StabilitySnapshot> replay(std::span<const TickRecord> log,
                                      const StabilityParams& params);

}  // namespace linkstab
