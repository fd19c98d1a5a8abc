#include "linkstab/core_model.hpp"

namespace linkstab {

StabilityTracker::StabilityTracker(StabilityParams params)
    : params_((params.validate(), params)),
      history_(params_),
      minima_(static_cast<std::size_t>(params_.lines)),
      consistence_ring_(static_cast<std::size_t>(params_.consistency_depth), 1),
      consistency_(params_.consistency_depth) {
  // Iteration 0 stands for the whole virtual pre-history.
  for (auto& window : minima_) window.push_back({0, params_.ticks_per_iteration});
}

StabilitySnapshot StabilityTracker::step(std::span<const Tick> ticks) {
  history_.check(ticks);

  const Iteration j = history_.iterations() + 1;
  const auto n = static_cast<std::size_t>(params_.lines);
  const std::int64_t m = params_.ticks_per_iteration;
  const std::int64_t z = params_.consistency_depth;

  std::vector<Tick> previous(n);
  int unchanged = 1;
  for (std::size_t i = 0; i < n; ++i) {
    previous[i] = history_.at(i, j - 1);
    if (previous[i] != ticks[i]) unchanged = 0;
  }

  // The slot currently holds R[j - z], which leaves the window now.
  auto& slot = consistence_ring_[static_cast<std::size_t>((j - 1) % z)];
  consistency_ += unchanged - slot;
  slot = static_cast<std::uint8_t>(unchanged);

  history_.append(ticks);

  StabilitySnapshot snap;
  snap.iteration = j;
  snap.consistency = consistency_;
  snap.lines.resize(n);

  std::int64_t alive = 0;
  std::int64_t historical_sum = 0;
  for (std::size_t i = 0; i < n; ++i) {
    auto& window = minima_[i];
    while (!window.empty() && window.back().tick >= ticks[i]) window.pop_back();
    window.push_back({j, ticks[i]});
    while (window.front().iteration < j - params_.history_depth) window.pop_front();

    auto& line = snap.lines[i];
    line.tick = ticks[i];
    line.status = ticks[i] > 0 ? 1 : 0;
    line.historical = window.front().tick;
    line.stability_numerator =
        std::int64_t{line.status} * previous[i] * line.historical * consistency_;
    line.stability = static_cast<double>(line.stability_numerator) / static_cast<double>(z * m * m);

    alive += line.status;
    historical_sum += line.historical;
  }

  const auto lines = static_cast<std::int64_t>(n);
  snap.pipe_numerator = alive * historical_sum * consistency_;
  snap.pipe_stability =
      static_cast<double>(snap.pipe_numerator) / static_cast<double>(z * m * lines * lines);
  return snap;
}

}  // namespace linkstab
