#include "linkstab/core_model.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "linkstab/errors.hpp"

namespace linkstab {

void StabilityParams::validate() const {
  if (lines < 1) throw ConfigError(fmt::format("number of lines must be >= 1, got {}", lines));
  if (ticks_per_iteration < 1)
    throw ConfigError(fmt::format("ticks per iteration must be >= 1, got {}", ticks_per_iteration));
  if (history_depth < 1)
    throw ConfigError(fmt::format("history depth k must be >= 1, got {}", history_depth));
  if (consistency_depth < 1)
    throw ConfigError(fmt::format("consistency depth z must be >= 1, got {}", consistency_depth));
  if (!(interval.count() > 0))
    throw ConfigError(fmt::format("interval must be > 0 s, got {}", interval.count()));
  if (!(timeout.count() > 0))
    throw ConfigError(fmt::format("timeout must be > 0 s, got {}", timeout.count()));
}

std::size_t StabilityParams::retention() const {
  return static_cast<std::size_t>(std::max(history_depth, consistency_depth)) + 2;
}

TickHistory::TickHistory(int lines, int ticks_per_iteration, std::size_t retention)
    : lines_(lines), max_tick_(ticks_per_iteration), retention_(retention) {
  if (lines < 1 || ticks_per_iteration < 1 || retention < 2)
    throw DomainError(fmt::format("invalid tick history shape: lines={} m={} retention={}",
                                  lines, ticks_per_iteration, retention));
  ring_.assign(retention_ * static_cast<std::size_t>(lines_), 0);
}

TickHistory::TickHistory(const StabilityParams& params)
    : TickHistory(params.lines, params.ticks_per_iteration, params.retention()) {}

Iteration TickHistory::oldest_retained() const noexcept {
  const auto kept = static_cast<Iteration>(retention_);
  return count_ > kept ? count_ - kept + 1 : 1;
}

bool TickHistory::readable(Iteration iteration) const noexcept {
  return iteration <= count_ && (iteration <= 0 || iteration >= oldest_retained());
}

Tick TickHistory::at(std::size_t line, Iteration iteration) const {
  if (line >= static_cast<std::size_t>(lines_))
    throw DomainError(fmt::format("line index {} out of range (n={})", line, lines_));
  if (iteration > count_)
    throw DomainError(fmt::format("iteration {} not recorded yet (current {})", iteration, count_));
  if (iteration <= 0) return max_tick_;
  if (iteration < oldest_retained())
    throw DomainError(fmt::format("iteration {} evicted (oldest retained {})", iteration,
                                  oldest_retained()));
  const auto row = static_cast<std::size_t>((iteration - 1) % static_cast<Iteration>(retention_));
  return ring_[row * static_cast<std::size_t>(lines_) + line];
}

void TickHistory::check(std::span<const Tick> ticks) const {
  if (ticks.size() != static_cast<std::size_t>(lines_))
    throw DomainError(
        fmt::format("tick vector has {} entries, expected {}", ticks.size(), lines_));
  for (std::size_t i = 0; i < ticks.size(); ++i) {
    if (ticks[i] < 0 || ticks[i] > max_tick_)
      throw DomainError(
          fmt::format("tick {} for line {} outside 0..{}", ticks[i], i + 1, max_tick_));
  }
}

void TickHistory::append(std::span<const Tick> ticks) {
  check(ticks);
  const auto row = static_cast<std::size_t>(count_ % static_cast<Iteration>(retention_));
  std::copy(ticks.begin(), ticks.end(),
            ring_.begin() + static_cast<std::ptrdiff_t>(row * static_cast<std::size_t>(lines_)));
  ++count_;
}

}  // namespace linkstab
