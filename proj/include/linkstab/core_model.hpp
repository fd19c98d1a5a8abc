#pragma once

// Stability model for an aggregated set of internet uplinks.
//
// Every iteration j yields one tick T[i][j] in 0..m per line i (the number of
// stable servers that answered). From the tick history we derive
//
//   L[i][j]  line status        1 if T[i][j] > 0, else 0
//   H[i][j]  historical status  min T[i][p] for p = j .. j-k   (k+1 values)
//   R[r]     iteration consist. 1 if T[i][r] == T[i][r-1] for every line
//   C[j]     consistency value  sum R[r] for r = j .. j-z+1     (z values)
//   S[i][j]  line stability     L * T[i][j-1] * H * C / (z * m^2)
//   IS[j]    pipe stability     sum(L) * sum(H) * C / (z * m * n^2)
//
// Ticks before iteration 1 are virtual and equal to m. All factors are exact
// integers; only the final division yields a double, so two routes that agree
// on the integers agree bit for bit on S and IS.

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <span>
#include <vector>

namespace linkstab {

using Tick = int;
using Iteration = std::int64_t;
using Seconds = std::chrono::duration<double>;

struct StabilityParams {
  int lines = 1;                // n
  int ticks_per_iteration = 10; // m, one tick per stable server
  int history_depth = 10;       // k
  int consistency_depth = 10;   // z
  Seconds interval{60.0};
  Seconds timeout{5.0};

  // Throws ConfigError when a field is out of range.
  void validate() const;

  // Iterations kept in memory by TickHistory.
  std::size_t retention() const;

  friend bool operator==(const StabilityParams&, const StabilityParams&) = default;
};

// Per-line ring buffer of ticks. Iterations are numbered from 1; any
// iteration p <= 0 reads as m. Only the newest `retention` iterations are
// kept, older ones are gone for good.
class TickHistory {
 public:
  TickHistory(int lines, int ticks_per_iteration, std::size_t retention);
  explicit TickHistory(const StabilityParams& params);

  int lines() const noexcept { return lines_; }
  int ticks_per_iteration() const noexcept { return max_tick_; }
  std::size_t retention() const noexcept { return retention_; }

  // Number of recorded iterations, i.e. the current j.
  Iteration iterations() const noexcept { return count_; }

  // Oldest real iteration still readable (1 when nothing was evicted).
  Iteration oldest_retained() const noexcept;

  bool readable(Iteration iteration) const noexcept;

  // Tick of `line` (0-based) at `iteration`; m for iteration <= 0.
  // Throws DomainError for lines out of range, future iterations or evicted ones.
  Tick at(std::size_t line, Iteration iteration) const;

  // Records one iteration. Throws DomainError (history untouched) unless
  // ticks has exactly `lines()` entries, each in 0..m.
  void append(std::span<const Tick> ticks);

  // Same checks as append, without recording.
  void check(std::span<const Tick> ticks) const;

 private:
  int lines_;
  int max_tick_;
  std::size_t retention_;
  Iteration count_ = 0;
  std::vector<Tick> ring_;  // retention_ rows of lines_ ticks
};

struct LineSnapshot {
  Tick tick = 0;
  int status = 0;       // L
  Tick historical = 0;  // H
  double stability = 0; // S
  std::int64_t stability_numerator = 0;  // L * T[j-1] * H * C

  friend bool operator==(const LineSnapshot&, const LineSnapshot&) = default;
};

struct StabilitySnapshot {
  Iteration iteration = 0;
  std::vector<LineSnapshot> lines;
  int consistency = 0;       // C
  double pipe_stability = 0; // IS
  std::int64_t pipe_numerator = 0;  // sum(L) * sum(H) * C

  friend bool operator==(const StabilitySnapshot&, const StabilitySnapshot&) = default;
};

// Alive mask: 0 for a dead line, 1 otherwise. Throws DomainError unless 0 <= tick <= max_tick.
int line_status(Tick tick, int max_tick);

// The window operations below read straight from a TickHistory. Each throws
// DomainError when a needed iteration is in the future or already evicted.

Tick historical_status(const TickHistory& history, std::size_t line, Iteration iteration,
                       int depth);

int iteration_consistence(const TickHistory& history, Iteration iteration);

int consistency_value(const TickHistory& history, Iteration iteration, int depth);

double line_stability(const TickHistory& history, std::size_t line, Iteration iteration,
                      const StabilityParams& params);

double pipe_stability(const TickHistory& history, Iteration iteration,
                      const StabilityParams& params);

// Incremental stepper. Keeps a monotone deque per line for the sliding
// minimum H and a ring of R values for the running sum C, so a step costs
// O(n) amortised regardless of k and z.
//
// Single writer: step() must not race with itself or with readers.
class StabilityTracker {
 public:
  explicit StabilityTracker(StabilityParams params);

  const StabilityParams& params() const noexcept { return params_; }
  const TickHistory& history() const noexcept { return history_; }
  Iteration iterations() const noexcept { return history_.iterations(); }

  // Records `ticks` as the next iteration and returns its snapshot. On
  // DomainError the tracker is left exactly as it was.
  StabilitySnapshot step(std::span<const Tick> ticks);

 private:
  struct WindowEntry {
    Iteration iteration;
    Tick tick;
  };

  StabilityParams params_;
  TickHistory history_;
  std::vector<std::deque<WindowEntry>> minima_;
  std::vector<std::uint8_t> consistence_ring_;  // R[r] at r mod z
  int consistency_ = 0;
};

// Reference recomputation from the full tick sequence, without any
// incremental state. ticks[p - 1] holds the tick vector of iteration p.
// Throws DomainError if iteration is outside 1..ticks.size() or a vector is
// malformed.
StabilitySnapshot oracle_recompute(const std::vector<std::vector<Tick>>& ticks,
                                   Iteration iteration, const StabilityParams& params);

}  // namespace linkstab
