#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "linkstab/core_model.hpp"

namespace linkstab {

// One of the m stable servers every line is probed against.
struct ProbeTarget {
  std::string url;
  std::string label;

  // Throws ConfigError unless url is absolute http(s) with a host.
  void validate() const;
};

// One uplink. `source` is a local address or interface name the probe binds
// to, so the request leaves through this line; the host routing table must
// honour source-based egress for that to take effect.
struct LineBinding {
  int id = 1;  // 1..n
  std::string name;
  std::optional<std::string> source;
  double bandwidth_mbps = 1.0;
};

enum class FailureKind { none, timeout, connect_error, http_error };

std::string_view to_string(FailureKind kind);
std::optional<FailureKind> failure_kind_from_string(std::string_view text);

struct ProbeOutcome {
  int line = 1;
  std::string target;
  bool success = false;
  double elapsed = 0;  // seconds
  FailureKind failure = FailureKind::none;

  friend bool operator==(const ProbeOutcome&, const ProbeOutcome&) = default;
};

// Performs one GET of `target` through `line` within `timeout`. Must never
// throw for network conditions: every failure maps onto a FailureKind.
class ProbeTransport {
 public:
  virtual ~ProbeTransport() = default;

  virtual ProbeOutcome probe(const LineBinding& line, const ProbeTarget& target,
                             Seconds timeout) = 0;

  // Whether a probe may block on I/O. Non-blocking transports are driven
  // inline instead of on worker threads.
  virtual bool blocking() const { return true; }
};

// Counts successes. Throws DomainError unless there are exactly
// `expected_count` outcomes, all for the same line.
Tick compute_tick(std::span<const ProbeOutcome> outcomes, std::size_t expected_count);

struct ProbeIteration {
  std::vector<Tick> ticks;              // one per line, in `lines` order
  std::vector<ProbeOutcome> outcomes;   // line-major, target order within a line
};

// Issues exactly lines.size() * targets.size() probes, concurrently for
// blocking transports, and joins them. Only configuration errors throw.
ProbeIteration probe_iteration(ProbeTransport& transport, std::span<const LineBinding> lines,
                               std::span<const ProbeTarget> targets, Seconds timeout);

// Real HTTP(S) transport on libcurl. Success means a 2xx/3xx status line and
// complete headers within the timeout; the body is not downloaded.
// Certificate verification stays on unless disabled.
class CurlTransport : public ProbeTransport {
 public:
  explicit CurlTransport(bool verify_tls = true);
  ~CurlTransport() override;

  CurlTransport(const CurlTransport&) = delete;
  CurlTransport& operator=(const CurlTransport&) = delete;

  ProbeOutcome probe(const LineBinding& line, const ProbeTarget& target,
                     Seconds timeout) override;

 private:
  bool verify_tls_;
};

}  // namespace linkstab
