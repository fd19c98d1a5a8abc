#include "linkstab/probe_engine.hpp"

#include <algorithm>
#include <future>
#include <set>

#include <curl/curl.h>
#include <fmt/format.h>

#include "linkstab/errors.hpp"

namespace linkstab {

void ProbeTarget::validate() const {
  CURLU* parsed = curl_url();
  if (parsed == nullptr) throw ConfigError("out of memory parsing url");
  const CURLUcode rc = curl_url_set(parsed, CURLUPART_URL, url.c_str(), 0);
  char* scheme = nullptr;
  char* host = nullptr;
  bool ok = rc == CURLUE_OK && curl_url_get(parsed, CURLUPART_SCHEME, &scheme, 0) == CURLUE_OK &&
            curl_url_get(parsed, CURLUPART_HOST, &host, 0) == CURLUE_OK;
  if (ok) {
    const std::string_view s{scheme};
    ok = (s == "http" || s == "https") && host[0] != '\0';
  }
  curl_free(scheme);
  curl_free(host);
  curl_url_cleanup(parsed);
  // curl would happily guess a scheme; insist on an explicit one.
  const auto scheme_end = url.find("://");
  if (!ok || scheme_end == std::string::npos || url.compare(scheme_end + 3, 1, "/") == 0)
    throw ConfigError(fmt::format("target '{}': '{}' is not an absolute http(s) url", label, url));
}

std::string_view to_string(FailureKind kind) {
  switch (kind) {
    case FailureKind::none: return "none";
    case FailureKind::timeout: return "timeout";
    case FailureKind::connect_error: return "connect-error";
    case FailureKind::http_error: return "http-error";
  }
  return "none";
}

std::optional<FailureKind> failure_kind_from_string(std::string_view text) {
  for (auto kind : {FailureKind::none, FailureKind::timeout, FailureKind::connect_error,
                    FailureKind::http_error}) {
    if (to_string(kind) == text) return kind;
  }
  return std::nullopt;
}

Tick compute_tick(std::span<const ProbeOutcome> outcomes, std::size_t expected_count) {
  if (outcomes.size() != expected_count)
    throw DomainError(
        fmt::format("expected {} probe outcomes, got {}", expected_count, outcomes.size()));
  if (!outcomes.empty()) {
    const int line = outcomes.front().line;
    if (std::any_of(outcomes.begin(), outcomes.end(),
                    [line](const ProbeOutcome& o) { return o.line != line; }))
      throw DomainError("probe outcomes span more than one line");
  }
  return static_cast<Tick>(std::count_if(outcomes.begin(), outcomes.end(),
                                         [](const ProbeOutcome& o) { return o.success; }));
}

namespace {

ProbeOutcome guarded_probe(ProbeTransport& transport, const LineBinding& line,
                           const ProbeTarget& target, Seconds timeout) {
  ProbeOutcome out;
  try {
    out = transport.probe(line, target, timeout);
  } catch (const std::exception&) {
    out = ProbeOutcome{};
    out.success = false;
    out.failure = FailureKind::connect_error;
  }
  out.line = line.id;
  out.target = target.label;
  if (out.success) out.failure = FailureKind::none;
  return out;
}

}  // namespace

ProbeIteration probe_iteration(ProbeTransport& transport, std::span<const LineBinding> lines,
                               std::span<const ProbeTarget> targets, Seconds timeout) {
  if (lines.empty()) throw ConfigError("no lines configured");
  if (targets.empty()) throw ConfigError("no probe targets configured");
  if (!(timeout.count() > 0)) throw ConfigError("probe timeout must be > 0");
  std::set<int> ids;
  for (const auto& line : lines) {
    if (line.id < 1 || line.id > static_cast<int>(lines.size()) || !ids.insert(line.id).second)
      throw ConfigError(fmt::format("line ids must be unique and within 1..{}", lines.size()));
  }

  const std::size_t m = targets.size();
  ProbeIteration result;
  result.outcomes.resize(lines.size() * m);

  if (transport.blocking()) {
    std::vector<std::future<ProbeOutcome>> pending;
    pending.reserve(result.outcomes.size());
    for (const auto& line : lines)
      for (const auto& target : targets)
        pending.push_back(std::async(std::launch::async, [&transport, &line, &target, timeout] {
          return guarded_probe(transport, line, target, timeout);
        }));
    for (std::size_t k = 0; k < pending.size(); ++k) result.outcomes[k] = pending[k].get();
  } else {
    std::size_t k = 0;
    for (const auto& line : lines)
      for (const auto& target : targets) result.outcomes[k++] = guarded_probe(transport, line, target, timeout);
  }

  result.ticks.reserve(lines.size());
  for (std::size_t i = 0; i < lines.size(); ++i)
    result.ticks.push_back(
        compute_tick(std::span(result.outcomes).subspan(i * m, m), m));
  return result;
}

}  // namespace linkstab
