#include <algorithm>
#include <chrono>
#include <mutex>

#include <curl/curl.h>

#include "linkstab/probe_engine.hpp"

namespace linkstab {

namespace {

std::once_flag curl_init_flag;

struct BodyGate {
  bool headers_done = false;
};

// First body byte means headers are complete; stop there.
std::size_t stop_at_body(char*, std::size_t, std::size_t, void* userdata) {
  static_cast<BodyGate*>(userdata)->headers_done = true;
  return 0;
}

}  // namespace

CurlTransport::CurlTransport(bool verify_tls) : verify_tls_(verify_tls) {
  std::call_once(curl_init_flag, [] { curl_global_init(CURL_GLOBAL_DEFAULT); });
}

CurlTransport::~CurlTransport() = default;

ProbeOutcome CurlTransport::probe(const LineBinding& line, const ProbeTarget& target,
                                  Seconds timeout) {
  ProbeOutcome out;
  out.line = line.id;
  out.target = target.label;

  const auto started = std::chrono::steady_clock::now();
  auto finish = [&](bool success, FailureKind kind) {
    out.success = success;
    out.failure = success ? FailureKind::none : kind;
    out.elapsed = Seconds(std::chrono::steady_clock::now() - started).count();
    return out;
  };

  CURL* handle = curl_easy_init();
  if (handle == nullptr) return finish(false, FailureKind::connect_error);

  const auto timeout_ms = std::max<long>(1, static_cast<long>(timeout.count() * 1000.0));
  BodyGate gate;
  curl_easy_setopt(handle, CURLOPT_URL, target.url.c_str());
  curl_easy_setopt(handle, CURLOPT_HTTPGET, 1L);
  curl_easy_setopt(handle, CURLOPT_NOSIGNAL, 1L);
  curl_easy_setopt(handle, CURLOPT_TIMEOUT_MS, timeout_ms);
  curl_easy_setopt(handle, CURLOPT_CONNECTTIMEOUT_MS, timeout_ms);
  curl_easy_setopt(handle, CURLOPT_FOLLOWLOCATION, 0L);
  curl_easy_setopt(handle, CURLOPT_FORBID_REUSE, 1L);
  curl_easy_setopt(handle, CURLOPT_SSL_VERIFYPEER, verify_tls_ ? 1L : 0L);
  curl_easy_setopt(handle, CURLOPT_SSL_VERIFYHOST, verify_tls_ ? 2L : 0L);
  curl_easy_setopt(handle, CURLOPT_USERAGENT, "linkstab/" LINKSTAB_VERSION);
  curl_easy_setopt(handle, CURLOPT_WRITEFUNCTION, &stop_at_body);
  curl_easy_setopt(handle, CURLOPT_WRITEDATA, &gate);
  if (line.source && !line.source->empty())
    curl_easy_setopt(handle, CURLOPT_INTERFACE, line.source->c_str());

  const CURLcode rc = curl_easy_perform(handle);
  long status = 0;
  curl_easy_getinfo(handle, CURLINFO_RESPONSE_CODE, &status);
  curl_easy_cleanup(handle);

  if (rc == CURLE_OK || (rc == CURLE_WRITE_ERROR && gate.headers_done)) {
    const bool good = status >= 200 && status < 400;
    return finish(good, FailureKind::http_error);
  }
  if (rc == CURLE_OPERATION_TIMEDOUT) return finish(false, FailureKind::timeout);
  return finish(false, FailureKind::connect_error);
}

}  // namespace linkstab
