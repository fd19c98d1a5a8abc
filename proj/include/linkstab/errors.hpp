#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace linkstab {

// Argument outside an operation's domain (bad tick, wrong vector length,
// iteration no longer retained).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Invalid configuration, scenario or parameter set.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A persisted tick log could not be replayed. Carries the offending iteration.
class ReplayError : public std::runtime_error {
 public:
  ReplayError(std::int64_t iteration, const std::string& what)
      : std::runtime_error(what), iteration_(iteration) {}

  std::int64_t iteration() const noexcept { return iteration_; }

 private:
  std::int64_t iteration_;
};

}  // namespace linkstab
