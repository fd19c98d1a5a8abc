#include <charconv>

#include <fmt/format.h>

#include "linkstab/errors.hpp"
#include "linkstab/scenario_sim.hpp"

namespace linkstab {

namespace {

// splitmix64 finalizer
std::uint64_t mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// "target-7" -> 6
int target_index(const ProbeTarget& target) {
  const std::string_view label = target.label;
  const auto dash = label.rfind('-');
  int index = 0;
  if (dash == std::string_view::npos ||
      std::from_chars(label.data() + dash + 1, label.data() + label.size(), index).ec != std::errc{})
    throw DomainError(fmt::format("unknown simulated target '{}'", target.label));
  return index - 1;
}

}  // namespace

SimulatedTransport::SimulatedTransport(const Scenario& scenario) : scenario_(scenario) {}

double SimulatedTransport::uniform(std::uint64_t seed, Iteration iteration, int line, int target) {
  std::uint64_t h = mix(seed);
  h = mix(h ^ static_cast<std::uint64_t>(iteration));
  h = mix(h ^ static_cast<std::uint64_t>(line));
  h = mix(h ^ static_cast<std::uint64_t>(target));
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

ProbeOutcome SimulatedTransport::probe(const LineBinding& line, const ProbeTarget& target,
                                       Seconds timeout) {
  const auto& model = scenario_.models.at(static_cast<std::size_t>(line.id - 1));
  const int index = target_index(target);
  const LinkPhase& phase = model.phase_at(iteration_);

  bool success = false;
  if (const auto* fixed = std::get_if<FixedTickPhase>(&phase.behavior)) {
    success = index < fixed->tick;
  } else {
    const double p = std::get<BernoulliPhase>(phase.behavior).success_probability;
    success = uniform(scenario_.seed, iteration_, line.id, index) < p;
  }

  ProbeOutcome out;
  out.line = line.id;
  out.target = target.label;
  out.success = success;
  out.failure = success ? FailureKind::none : FailureKind::timeout;
  out.elapsed = success ? 0.0 : timeout.count();
  return out;
}

std::vector<std::vector<Tick>> SimulationResult::ticks() const {
  std::vector<std::vector<Tick>> out;
  out.reserve(steps.size());
  for (const auto& step : steps) {
    std::vector<Tick> row;
    for (const auto& line : step.snapshot.lines) row.push_back(line.tick);
    out.push_back(std::move(row));
  }
  return out;
}

SimulationResult simulate(const Scenario& scenario) {
  scenario.validate();

  const auto lines = scenario.line_bindings();
  const auto targets = scenario.targets();
  const auto bandwidths = scenario.bandwidths();

  SimulationResult result;
  result.bandwidth_factors = bandwidth_factors(bandwidths, scenario.scale_base);
  result.steps.reserve(static_cast<std::size_t>(scenario.length));

  SimulatedTransport transport(scenario);
  StabilityTracker tracker(scenario.params);
  std::optional<AdmissionDecision> previous_admission;

  for (Iteration j = 1; j <= scenario.length; ++j) {
    transport.begin_iteration(j);
    const ProbeIteration probes =
        probe_iteration(transport, lines, targets, scenario.params.timeout);

    SimulationStep step;
    step.snapshot = tracker.step(probes.ticks);
    const WeightTable* previous = result.steps.empty() ? nullptr : &result.steps.back().weights;
    WeightUpdate update = build_weight_table(step.snapshot, result.bandwidth_factors, previous);
    step.weights = std::move(update.table);
    step.events = std::move(update.events);
    step.admission = admission_decision(step.snapshot, scenario.admission_threshold);
    if (auto event = admission_event(step.admission, previous_admission, j))
      step.events.push_back(std::move(*event));
    previous_admission = step.admission;
    result.steps.push_back(std::move(step));
  }
  return result;
}

std::vector<StabilitySnapshot> replay(std::span<const TickRecord> log,
                                      const StabilityParams& params) {
  std::vector<StabilitySnapshot> out;
  if (log.empty()) return out;
  StabilityTracker tracker(params);
  out.reserve(log.size());
  Iteration expected = 1;
  for (const auto& record : log) {
    if (record.iteration != expected)
      throw ReplayError(expected, fmt::format("iteration gap: expected {}, found {}", expected,
                                              record.iteration));
    try {
      out.push_back(tracker.step(record.ticks));
    } catch (const DomainError& e) {
      throw ReplayError(record.iteration,
                        fmt::format("malformed ticks at iteration {}: {}", record.iteration, e.what()));
    }
    ++expected;
  }
  return out;
}

}  // namespace linkstab
