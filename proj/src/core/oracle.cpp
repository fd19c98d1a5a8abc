#include <algorithm>

#include <fmt/format.h>

#include "linkstab/core_model.hpp"
#include "linkstab/errors.hpp"

namespace linkstab {

StabilitySnapshot oracle_recompute(const std::vector<std::vector<Tick>>& ticks,
                                   Iteration iteration, const StabilityParams& params) {
  params.validate();
  if (iteration < 1 || iteration > static_cast<Iteration>(ticks.size()))
    throw DomainError(fmt::format("iteration {} outside 1..{}", iteration, ticks.size()));

  const int n = params.lines;
  const int m = params.ticks_per_iteration;
  for (std::size_t p = 0; p < static_cast<std::size_t>(iteration); ++p) {
    if (ticks[p].size() != static_cast<std::size_t>(n))
      throw DomainError(fmt::format("iteration {} has {} ticks, expected {}", p + 1,
                                    ticks[p].size(), n));
    for (Tick t : ticks[p])
      if (t < 0 || t > m) throw DomainError(fmt::format("iteration {} tick {} outside 0..{}", p + 1, t, m));
  }

  auto tick = [&](int line, Iteration p) -> std::int64_t {
    return p <= 0 ? m : ticks[static_cast<std::size_t>(p - 1)][static_cast<std::size_t>(line)];
  };
  auto status = [&](int line, Iteration p) -> std::int64_t { return tick(line, p) <= 0 ? 0 : 1; };
  auto historical = [&](int line, Iteration j) {
    std::int64_t lowest = tick(line, j);
    for (Iteration p = j; p >= j - params.history_depth; --p) lowest = std::min(lowest, tick(line, p));
    return lowest;
  };
  auto consistence = [&](Iteration r) -> std::int64_t {
    for (int line = 0; line < n; ++line)
      if (tick(line, r) != tick(line, r - 1)) return 0;
    return 1;
  };

  const Iteration j = iteration;
  std::int64_t c = 0;
  for (Iteration r = j; r >= j - params.consistency_depth + 1; --r) c += consistence(r);

  StabilitySnapshot snap;
  snap.iteration = j;
  snap.consistency = static_cast<int>(c);
  std::int64_t alive = 0;
  std::int64_t historical_sum = 0;
  const std::int64_t z = params.consistency_depth;
  for (int line = 0; line < n; ++line) {
    LineSnapshot ls;
    ls.tick = static_cast<Tick>(tick(line, j));
    ls.status = static_cast<int>(status(line, j));
    ls.historical = static_cast<Tick>(historical(line, j));
    ls.stability_numerator = status(line, j) * tick(line, j - 1) * historical(line, j) * c;
    ls.stability = static_cast<double>(ls.stability_numerator) /
                   static_cast<double>(z * std::int64_t{m} * m);
    alive += ls.status;
    historical_sum += ls.historical;
    snap.lines.push_back(ls);
  }
  snap.pipe_numerator = alive * historical_sum * c;
  snap.pipe_stability = static_cast<double>(snap.pipe_numerator) /
                        static_cast<double>(z * std::int64_t{m} * n * n);
  return snap;
}

}  // namespace linkstab
