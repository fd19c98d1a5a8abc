#pragma once

// Test-only recomputation of the stability indices, written from the
// definitions with a different C formulation (z minus changed iterations)
// than both the tracker and oracle_recompute.

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

#include "linkstab/core_model.hpp"

namespace linkstab::testing {

struct ReferenceValues {
  int consistency;
  std::vector<std::int64_t> line_numerators;
  std::int64_t pipe_numerator;
};

inline ReferenceValues reference_at(const std::vector<std::vector<Tick>>& ticks, std::int64_t j,
                                    int m, int k, int z) {
  const auto n = ticks.front().size();
  auto t = [&](std::size_t i, std::int64_t p) -> std::int64_t {
    return p <= 0 ? m : ticks[static_cast<std::size_t>(p - 1)][i];
  };
  int changes = 0;
  for (std::int64_t r = j - z + 1; r <= j; ++r) {
    bool changed = false;
    for (std::size_t i = 0; i < n; ++i) changed = changed || t(i, r) != t(i, r - 1);
    changes += changed ? 1 : 0;
  }
  ReferenceValues out{z - changes, {}, 0};
  std::int64_t alive = 0;
  std::int64_t hsum = 0;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::int64_t> window;
    for (std::int64_t p = j - k; p <= j; ++p) window.push_back(t(i, p));
    const std::int64_t h = *std::min_element(window.begin(), window.end());
    const std::int64_t l = t(i, j) > 0;
    out.line_numerators.push_back(l * t(i, j - 1) * h * out.consistency);
    alive += l;
    hsum += h;
  }
  out.pipe_numerator = alive * hsum * out.consistency;
  return out;
}

// Random tick stream. Ticks are sticky so that runs of unchanged iterations
// (C > 0) actually occur.
inline std::vector<std::vector<Tick>> random_stream(std::mt19937_64& rng, int n, int m,
                                                    int length) {
  std::uniform_int_distribution<int> tick(0, m);
  std::uniform_int_distribution<int> coin(0, 3);
  std::vector<std::vector<Tick>> out;
  std::vector<Tick> current(static_cast<std::size_t>(n), m);
  for (int p = 0; p < length; ++p) {
    for (auto& t : current)
      if (coin(rng) == 0) t = tick(rng);
    out.push_back(current);
  }
  return out;
}

}  // namespace linkstab::testing
