#include <doctest.h>

#include <random>

#include "linkstab/core_model.hpp"
#include "linkstab/errors.hpp"
#include "support/reference.hpp"

using namespace linkstab;

namespace {

StabilityParams params_of(int n, int m, int k, int z) {
  StabilityParams p;
  p.lines = n;
  p.ticks_per_iteration = m;
  p.history_depth = k;
  p.consistency_depth = z;
  return p;
}

TickHistory history_of(const std::vector<std::vector<Tick>>& ticks, const StabilityParams& p) {
  TickHistory h(p);
  for (const auto& row : ticks) h.append(row);
  return h;
}

}  // namespace

TEST_CASE("params validation") {
  CHECK_NOTHROW(params_of(1, 1, 1, 1).validate());
  CHECK_THROWS_AS(params_of(0, 10, 10, 10).validate(), ConfigError);
  CHECK_THROWS_AS(params_of(1, 0, 10, 10).validate(), ConfigError);
  CHECK_THROWS_AS(params_of(1, 10, 0, 10).validate(), ConfigError);
  CHECK_THROWS_AS(params_of(1, 10, 10, 0).validate(), ConfigError);
  auto p = params_of(1, 10, 10, 10);
  p.timeout = Seconds(0);
  CHECK_THROWS_AS(p.validate(), ConfigError);
  CHECK(params_of(3, 10, 4, 7).retention() == 9);
}

TEST_CASE("line_status") {
  CHECK(line_status(0, 10) == 0);
  CHECK(line_status(5, 10) == 1);
  CHECK(line_status(10, 10) == 1);
  CHECK_THROWS_AS(line_status(-1, 10), DomainError);
  CHECK_THROWS_AS(line_status(11, 10), DomainError);
}

TEST_CASE("tick history ring buffer") {
  TickHistory h(2, 10, 3);
  CHECK(h.iterations() == 0);
  CHECK(h.at(0, 0) == 10);
  CHECK(h.at(1, -5) == 10);
  CHECK_THROWS_AS(h.at(0, 1), DomainError);

  for (int p = 1; p <= 5; ++p) h.append(std::vector<Tick>{p, 10 - p});
  CHECK(h.iterations() == 5);
  CHECK(h.oldest_retained() == 3);
  CHECK(h.at(0, 5) == 5);
  CHECK(h.at(1, 3) == 7);
  CHECK_THROWS_AS(h.at(0, 2), DomainError);
  CHECK_THROWS_AS(h.at(2, 5), DomainError);

  SUBCASE("bad vectors leave history untouched") {
    CHECK_THROWS_AS(h.append(std::vector<Tick>{1}), DomainError);
    CHECK_THROWS_AS(h.append(std::vector<Tick>{1, 11}), DomainError);
    CHECK_THROWS_AS(h.append(std::vector<Tick>{-1, 1}), DomainError);
    CHECK(h.iterations() == 5);
    CHECK(h.at(0, 5) == 5);
  }
}

TEST_CASE("historical_status") {
  const auto p = params_of(1, 2, 2, 2);
  SUBCASE("window [2,1,2] newest first") {
    const auto h = history_of({{2}, {1}, {2}}, p);
    CHECK(historical_status(h, 0, 3, 2) == 1);
  }
  SUBCASE("constant m") {
    const auto h = history_of({{2}, {2}, {2}, {2}}, p);
    for (int k = 1; k <= 3; ++k) CHECK(historical_status(h, 0, 4, k) == 2);
  }
  SUBCASE("first iteration reads virtual pre-history") {
    const auto h = history_of({{1}}, p);
    CHECK(historical_status(h, 0, 1, 2) == 1);
  }
  SUBCASE("window covers k+1 ticks including the current one") {
    const auto q = params_of(1, 10, 2, 2);
    const auto h = history_of({{3}, {10}, {10}, {10}}, q);
    CHECK(historical_status(h, 0, 3, 2) == 3);
    CHECK(historical_status(h, 0, 4, 2) == 10);
  }
}

TEST_CASE("iteration_consistence") {
  const auto p = params_of(2, 10, 3, 3);
  SUBCASE("no change") {
    const auto h = history_of({{10, 7}, {10, 7}}, p);
    CHECK(iteration_consistence(h, 2) == 1);
  }
  SUBCASE("one line changed") {
    const auto h = history_of({{10, 8}, {10, 7}}, p);
    CHECK(iteration_consistence(h, 2) == 0);
  }
  SUBCASE("first iteration against virtual m") {
    CHECK(iteration_consistence(history_of({{10, 10}}, p), 1) == 1);
    CHECK(iteration_consistence(history_of({{10, 9}}, p), 1) == 0);
  }
}

TEST_CASE("consistency_value") {
  const auto p = params_of(1, 2, 2, 2);
  CHECK(consistency_value(history_of({{2}, {2}, {2}}, p), 3, 2) == 2);
  CHECK(consistency_value(history_of({{2}, {1}, {2}}, p), 3, 2) == 0);
  CHECK(consistency_value(history_of({{2}, {1}}, p), 2, 2) == 1);
  CHECK_THROWS_AS(consistency_value(history_of({{2}}, p), 2, 2), DomainError);
}

TEST_CASE("line_stability and pipe_stability on the hand trace") {
  const auto p = params_of(1, 2, 2, 2);
  const auto h = history_of({{2}, {1}, {2}}, p);
  CHECK(line_stability(h, 0, 1, p) == 1.0);
  CHECK(line_stability(h, 0, 2, p) == 0.25);
  CHECK(line_stability(h, 0, 3, p) == 0.0);
  CHECK(pipe_stability(h, 1, p) == 1.0);
  CHECK(pipe_stability(h, 2, p) == 0.25);
  CHECK(pipe_stability(h, 3, p) == 0.0);
}

TEST_CASE("tick 0 masks stability") {
  const auto p = params_of(2, 10, 10, 10);
  const auto h = history_of({{10, 10}, {10, 0}}, p);
  CHECK(line_stability(h, 1, 2, p) == 0.0);
  CHECK(line_stability(h, 0, 2, p) > 0.0);
}

TEST_CASE("all lines dead gives zero pipe stability") {
  const auto p = params_of(3, 10, 10, 10);
  const auto h = history_of({{0, 0, 0}, {0, 0, 0}}, p);
  CHECK(pipe_stability(h, 2, p) == 0.0);
}

TEST_CASE("step") {
  SUBCASE("first step at m is saturated") {
    StabilityTracker t(params_of(3, 10, 10, 10));
    const auto s = t.step(std::vector<Tick>{10, 10, 10});
    CHECK(s.iteration == 1);
    CHECK(s.consistency == 10);
    CHECK(s.pipe_stability == 1.0);
    for (const auto& line : s.lines) CHECK(line.stability == 1.0);
  }
  SUBCASE("dead line") {
    StabilityTracker t(params_of(2, 10, 10, 10));
    const auto s = t.step(std::vector<Tick>{10, 0});
    CHECK(s.lines[1].stability == 0.0);
    CHECK(s.lines[1].status == 0);
  }
  SUBCASE("two steps of the hand trace") {
    StabilityTracker t(params_of(1, 2, 2, 2));
    t.step(std::vector<Tick>{2});
    const auto s = t.step(std::vector<Tick>{1});
    CHECK(s.lines[0].stability == 0.25);
    CHECK(s.pipe_stability == 0.25);
  }
  SUBCASE("rejects bad input without side effects") {
    StabilityTracker t(params_of(2, 10, 3, 3));
    t.step(std::vector<Tick>{10, 9});
    CHECK_THROWS_AS(t.step(std::vector<Tick>{10}), DomainError);
    CHECK_THROWS_AS(t.step(std::vector<Tick>{10, 11}), DomainError);
    CHECK(t.iterations() == 1);
    const auto s = t.step(std::vector<Tick>{10, 9});
    CHECK(s.iteration == 2);
    CHECK(s == oracle_recompute({{10, 9}, {10, 9}}, 2, t.params()));
  }
}

TEST_CASE("line dies and revives") {
  // Frozen from an independent rational-arithmetic recomputation.
  const auto p = params_of(1, 10, 3, 3);
  const std::vector<std::vector<Tick>> ticks{{10}, {10}, {0}, {0}, {10}, {10}, {10}, {10}, {10}, {10}};
  const std::vector<double> expected_s{1, 1, 0, 0, 0, 0, 0, 1, 1, 1};
  const std::vector<int> expected_c{3, 3, 2, 2, 1, 2, 2, 3, 3, 3};
  const std::vector<int> expected_h{10, 10, 0, 0, 0, 0, 0, 10, 10, 10};
  StabilityTracker t(p);
  for (std::size_t j = 0; j < ticks.size(); ++j) {
    const auto s = t.step(ticks[j]);
    CHECK(s.lines[0].stability == expected_s[j]);
    CHECK(s.consistency == expected_c[j]);
    CHECK(s.lines[0].historical == expected_h[j]);
    CHECK(s == oracle_recompute(ticks, static_cast<Iteration>(j + 1), p));
  }
}

TEST_CASE("oracle_recompute") {
  const auto p = params_of(1, 2, 2, 2);
  SUBCASE("length one uses pre-history") {
    const auto s = oracle_recompute({{1}}, 1, p);
    CHECK(s.lines[0].historical == 1);
    CHECK(s.consistency == 1);
    CHECK(s.lines[0].stability == 0.25);  // 1 * 2 * 1 * 1 / 8
  }
  CHECK_THROWS_AS(oracle_recompute({{1}}, 2, p), DomainError);
  CHECK_THROWS_AS(oracle_recompute({{3}}, 1, p), DomainError);
}

TEST_CASE("property: incremental step equals both recomputations") {
  std::mt19937_64 rng(20240611);
  std::uniform_int_distribution<int> n_dist(1, 4), m_dist(1, 10), depth(1, 10), len(1, 50);
  for (int trial = 0; trial < 300; ++trial) {
    const auto p = params_of(n_dist(rng), m_dist(rng), depth(rng), depth(rng));
    const auto ticks = testing::random_stream(rng, p.lines, p.ticks_per_iteration, len(rng));
    StabilityTracker tracker(p);
    for (std::size_t j = 1; j <= ticks.size(); ++j) {
      const auto snap = tracker.step(ticks[j - 1]);
      const auto ref = testing::reference_at(ticks, static_cast<Iteration>(j),
                                             p.ticks_per_iteration, p.history_depth,
                                             p.consistency_depth);
      REQUIRE(snap == oracle_recompute(ticks, static_cast<Iteration>(j), p));
      REQUIRE(snap.consistency == ref.consistency);
      REQUIRE(snap.pipe_numerator == ref.pipe_numerator);
      for (std::size_t i = 0; i < snap.lines.size(); ++i) {
        const auto& line = snap.lines[i];
        REQUIRE(line.stability_numerator == ref.line_numerators[i]);
        // Range and mask invariants.
        REQUIRE(line.stability >= 0.0);
        REQUIRE(line.stability <= 1.0);
        REQUIRE(line.historical >= 0);
        REQUIRE(line.historical <= p.ticks_per_iteration);
        REQUIRE(line.historical <= line.tick);
        if (line.tick == 0) REQUIRE(line.stability == 0.0);
        // The window functions agree with the tracker while still retained.
        REQUIRE(line_stability(tracker.history(), i, static_cast<Iteration>(j), p) == line.stability);
      }
      REQUIRE(snap.pipe_stability >= 0.0);
      REQUIRE(snap.pipe_stability <= 1.0);
      REQUIRE(snap.consistency >= 0);
      REQUIRE(snap.consistency <= p.consistency_depth);
      REQUIRE(pipe_stability(tracker.history(), static_cast<Iteration>(j), p) == snap.pipe_stability);
    }
  }
}

TEST_CASE("property: saturation after max(k,z)+1 iterations at m") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> n_dist(1, 4), m_dist(1, 10), depth(1, 10), len(0, 20);
  for (int trial = 0; trial < 200; ++trial) {
    const auto p = params_of(n_dist(rng), m_dist(rng), depth(rng), depth(rng));
    StabilityTracker tracker(p);
    for (const auto& row : testing::random_stream(rng, p.lines, p.ticks_per_iteration, len(rng)))
      tracker.step(row);
    const std::vector<Tick> full(static_cast<std::size_t>(p.lines), p.ticks_per_iteration);
    StabilitySnapshot last;
    for (int q = 0; q <= std::max(p.history_depth, p.consistency_depth); ++q) last = tracker.step(full);
    REQUIRE(last.pipe_stability == 1.0);
    for (const auto& line : last.lines) REQUIRE(line.stability == 1.0);
  }
}

TEST_CASE("window functions refuse evicted iterations") {
  const auto p = params_of(1, 10, 2, 2);
  StabilityTracker tracker(p);
  for (int q = 0; q < 10; ++q) tracker.step(std::vector<Tick>{10});
  CHECK_NOTHROW(line_stability(tracker.history(), 0, 10, p));
  CHECK_THROWS_AS(line_stability(tracker.history(), 0, 3, p), DomainError);
}
