#include <doctest.h>

#include "linkstab/errors.hpp"
#include "linkstab/scenario_sim.hpp"

using namespace linkstab;

namespace {

LinkModel fixed(const std::string& name, std::vector<std::pair<int, Tick>> phases, double bw = 10) {
  LinkModel model{name, bw, {}};
  for (auto [duration, tick] : phases) model.phases.push_back({duration, FixedTickPhase{tick}});
  return model;
}

LinkModel bernoulli(const std::string& name, std::vector<std::pair<int, double>> phases, double bw = 10) {
  LinkModel model{name, bw, {}};
  for (auto [duration, p] : phases) model.phases.push_back({duration, BernoulliPhase{p}});
  return model;
}

Scenario scenario(std::vector<LinkModel> models, Iteration length, int m = 10, int k = 10, int z = 10,
                  std::uint64_t seed = 1) {
  Scenario s;
  s.params.lines = static_cast<int>(models.size());
  s.params.ticks_per_iteration = m;
  s.params.history_depth = k;
  s.params.consistency_depth = z;
  s.models = std::move(models);
  s.length = length;
  s.seed = seed;
  return s;
}

}  // namespace

TEST_CASE("phase_at repeats the last phase") {
  const auto model = fixed("a", {{2, 10}, {3, 5}});
  CHECK(std::get<FixedTickPhase>(model.phase_at(1).behavior).tick == 10);
  CHECK(std::get<FixedTickPhase>(model.phase_at(2).behavior).tick == 10);
  CHECK(std::get<FixedTickPhase>(model.phase_at(3).behavior).tick == 5);
  CHECK(std::get<FixedTickPhase>(model.phase_at(500).behavior).tick == 5);
}

TEST_CASE("scenario validation") {
  auto good = scenario({fixed("a", {{5, 10}})}, 5);
  CHECK_NOTHROW(good.validate());

  auto wrong_n = good;
  wrong_n.params.lines = 2;
  CHECK_THROWS_AS(wrong_n.validate(), ConfigError);

  CHECK_THROWS_AS(scenario({fixed("a", {{5, 11}})}, 5).validate(), ConfigError);
  CHECK_THROWS_AS(scenario({fixed("a", {{0, 10}})}, 5).validate(), ConfigError);
  CHECK_THROWS_AS(scenario({bernoulli("a", {{5, 1.5}})}, 5).validate(), ConfigError);
  CHECK_THROWS_AS(scenario({fixed("a", {{5, 10}})}, 0).validate(), ConfigError);
  CHECK_THROWS_AS(simulate(scenario({LinkModel{"a", 10, {}}}, 5)), ConfigError);
}

TEST_CASE("saturated scenario") {
  const auto result = simulate(scenario({fixed("a", {{30, 10}}), fixed("b", {{30, 10}})}, 30));
  REQUIRE(result.steps.size() == 30);
  for (const auto& step : result.steps) {
    CHECK(step.snapshot.pipe_stability == 1.0);
    for (const auto& line : step.snapshot.lines) CHECK(line.stability == 1.0);
    CHECK(step.events.empty());
  }
}

TEST_CASE("dead line stays out of service") {
  const auto result = simulate(scenario({fixed("a", {{1, 10}}), fixed("dead", {{1, 0}})}, 25));
  for (const auto& step : result.steps) {
    CHECK(step.snapshot.lines[1].stability == 0.0);
    CHECK(step.weights.lines[1].weight == 0);
    CHECK_FALSE(step.weights.lines[1].in_service);
  }
}

TEST_CASE("fixed tick phases are exact") {
  const auto result = simulate(scenario({fixed("a", {{4, 7}, {4, 3}, {1, 0}})}, 12));
  const std::vector<Tick> expected{7, 7, 7, 7, 3, 3, 3, 3, 0, 0, 0, 0};
  const auto ticks = result.ticks();
  for (std::size_t j = 0; j < expected.size(); ++j) CHECK(ticks[j][0] == expected[j]);
}

TEST_CASE("determinism and seed sensitivity") {
  auto s = scenario({bernoulli("a", {{1, 0.5}}), bernoulli("b", {{1, 0.9}})}, 200, 10, 10, 10, 42);
  const auto first = simulate(s);
  const auto second = simulate(s);
  REQUIRE(first.steps.size() == second.steps.size());
  for (std::size_t j = 0; j < first.steps.size(); ++j) {
    CHECK(first.steps[j].snapshot == second.steps[j].snapshot);
    CHECK(first.steps[j].weights == second.steps[j].weights);
    CHECK(first.steps[j].events == second.steps[j].events);
  }
  s.seed = 43;
  CHECK(simulate(s).ticks() != first.ticks());
}

TEST_CASE("bernoulli draws") {
  double sum = 0;
  for (int t = 0; t < 10000; ++t) {
    const double u = SimulatedTransport::uniform(5, t, 1, t % 10);
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  CHECK(sum / 10000 == doctest::Approx(0.5).epsilon(0.02));

  const auto result = simulate(scenario({bernoulli("a", {{1, 0.7}})}, 500, 10, 10, 10, 9));
  double ticks = 0;
  for (const auto& row : result.ticks()) ticks += row[0];
  CHECK(ticks / 500 == doctest::Approx(7.0).epsilon(0.04));

  // p = 0 and p = 1 are deterministic.
  const auto edges = simulate(scenario({bernoulli("a", {{1, 0.0}}), bernoulli("b", {{1, 1.0}})}, 50));
  for (const auto& row : edges.ticks()) {
    CHECK(row[0] == 0);
    CHECK(row[1] == 10);
  }
}

TEST_CASE("replay reproduces simulated snapshots") {
  const auto s = scenario({bernoulli("a", {{40, 0.95}, {5, 0.0}, {1, 0.8}}), fixed("b", {{10, 10}, {10, 6}})},
                          120, 10, 4, 6, 77);
  const auto result = simulate(s);
  std::vector<TickRecord> log;
  for (const auto& step : result.steps) {
    TickRecord r{step.snapshot.iteration, {}};
    for (const auto& line : step.snapshot.lines) r.ticks.push_back(line.tick);
    log.push_back(r);
  }
  const auto replayed = replay(log, s.params);
  REQUIRE(replayed.size() == result.steps.size());
  for (std::size_t j = 0; j < replayed.size(); ++j) CHECK(replayed[j] == result.steps[j].snapshot);

  CHECK(replay({}, s.params).empty());

  SUBCASE("gap") {
    auto gapped = log;
    gapped.erase(gapped.begin() + 9);
    try {
      replay(gapped, s.params);
      FAIL("expected a replay error");
    } catch (const ReplayError& e) {
      CHECK(e.iteration() == 10);
    }
  }
  SUBCASE("malformed record") {
    auto bad = log;
    bad[4].ticks.push_back(1);
    try {
      replay(bad, s.params);
      FAIL("expected a replay error");
    } catch (const ReplayError& e) {
      CHECK(e.iteration() == 5);
    }
  }
}

TEST_CASE("one changing line scales every line by the shared C") {
  const int z = 5;
  const auto result = simulate(
      scenario({fixed("steady", {{1, 10}}), fixed("flappy", {{8, 10}, {3, 9}, {9, 6}, {1, 10}})}, 40, 10, 5, z));
  for (const auto& step : result.steps) {
    const auto& s = step.snapshot;
    CHECK(s.lines[0].stability * z == doctest::Approx(s.consistency));
    CHECK(s.lines[0].stability == static_cast<double>(s.consistency) / z);
  }
}
