#pragma once

#include <optional>
#include <string>

#include "linkstab/iteration_log.hpp"

namespace linkstab {

struct VerifyResult {
  bool ok = true;
  std::optional<Iteration> first_divergence;
  std::string message;
};

// Re-derives every snapshot from the logged ticks and compares L, H, S, C,
// IS and the weights bit for bit. With `expected` set, the header must carry
// the same n, m, k, z and scale_base or ParameterMismatch is thrown.
VerifyResult verify_log(const LogContents& log, const LogHeader* expected = nullptr);

}  // namespace linkstab
