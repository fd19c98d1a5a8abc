#include <algorithm>

#include <fmt/format.h>

#include "linkstab/core_model.hpp"
#include "linkstab/errors.hpp"

namespace linkstab {

namespace {

void require_current(const TickHistory& history, Iteration iteration) {
  if (iteration < 1 || iteration > history.iterations())
    throw DomainError(fmt::format("iteration {} outside 1..{}", iteration, history.iterations()));
}

void require_depth(int depth) {
  if (depth < 1) throw DomainError(fmt::format("window depth must be >= 1, got {}", depth));
}

}  // namespace

int line_status(Tick tick, int max_tick) {
  if (tick < 0 || tick > max_tick)
    throw DomainError(fmt::format("tick {} outside 0..{}", tick, max_tick));
  return tick > 0 ? 1 : 0;
}

Tick historical_status(const TickHistory& history, std::size_t line, Iteration iteration,
                       int depth) {
  require_current(history, iteration);
  require_depth(depth);
  Tick lowest = history.at(line, iteration);
  for (Iteration p = iteration - 1; p >= iteration - depth; --p)
    lowest = std::min(lowest, history.at(line, p));
  return lowest;
}

int iteration_consistence(const TickHistory& history, Iteration iteration) {
  if (iteration > history.iterations())
    throw DomainError(fmt::format("iteration {} not recorded yet", iteration));
  // Both sides virtual: m == m.
  if (iteration <= 0) return 1;
  for (std::size_t line = 0; line < static_cast<std::size_t>(history.lines()); ++line) {
    if (history.at(line, iteration) != history.at(line, iteration - 1)) return 0;
  }
  return 1;
}

int consistency_value(const TickHistory& history, Iteration iteration, int depth) {
  require_current(history, iteration);
  require_depth(depth);
  int sum = 0;
  for (Iteration r = iteration; r > iteration - depth; --r) sum += iteration_consistence(history, r);
  return sum;
}

double line_stability(const TickHistory& history, std::size_t line, Iteration iteration,
                      const StabilityParams& params) {
  require_current(history, iteration);
  const std::int64_t m = params.ticks_per_iteration;
  const std::int64_t status = line_status(history.at(line, iteration), history.ticks_per_iteration());
  const std::int64_t numerator = status * history.at(line, iteration - 1) *
                                 historical_status(history, line, iteration, params.history_depth) *
                                 consistency_value(history, iteration, params.consistency_depth);
  return static_cast<double>(numerator) /
         static_cast<double>(params.consistency_depth * m * m);
}

double pipe_stability(const TickHistory& history, Iteration iteration,
                      const StabilityParams& params) {
  require_current(history, iteration);
  const std::int64_t n = history.lines();
  std::int64_t alive = 0;
  std::int64_t historical = 0;
  for (std::size_t line = 0; line < static_cast<std::size_t>(n); ++line) {
    alive += line_status(history.at(line, iteration), history.ticks_per_iteration());
    historical += historical_status(history, line, iteration, params.history_depth);
  }
  const std::int64_t numerator =
      alive * historical * consistency_value(history, iteration, params.consistency_depth);
  return static_cast<double>(numerator) /
         static_cast<double>(params.consistency_depth * params.ticks_per_iteration * n * n);
}

}  // namespace linkstab
