#pragma once

#include <chrono>
#include <string>
#include <thread>

// Probes arrive in bursts of n*m concurrent connects.
#define CPPHTTPLIB_LISTEN_BACKLOG 128
#include <httplib.h>

namespace linkstab::testing {

// Loopback HTTP server with a few canned endpoints.
class LocalServer {
 public:
  LocalServer() {
    // Slow handlers keep sleeping after the client gives up; a wide pool keeps
    // them from starving fast requests in later iterations.
    server_.new_task_queue = [] { return new httplib::ThreadPool(64); };
    server_.Get("/ok", [](const httplib::Request&, httplib::Response& res) {
      res.set_content("hello", "text/plain");
    });
    server_.Get("/empty", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
    server_.Get("/redirect", [](const httplib::Request&, httplib::Response& res) {
      res.set_redirect("/ok");
    });
    server_.Get("/error", [](const httplib::Request&, httplib::Response& res) {
      res.status = 500;
      res.set_content("boom", "text/plain");
    });
    server_.Get("/missing", [](const httplib::Request&, httplib::Response& res) { res.status = 404; });
    server_.Get("/slow", [](const httplib::Request&, httplib::Response& res) {
      std::this_thread::sleep_for(std::chrono::milliseconds(1500));
      res.set_content("late", "text/plain");
    });
    server_.Get("/big", [](const httplib::Request&, httplib::Response& res) {
      res.set_content(std::string(32 * 1024 * 1024, 'x'), "application/octet-stream");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }

  ~LocalServer() {
    server_.stop();
    if (thread_.joinable()) thread_.join();
  }

  LocalServer(const LocalServer&) = delete;
  LocalServer& operator=(const LocalServer&) = delete;

  std::string url(const std::string& path) const {
    return "http://127.0.0.1:" + std::to_string(port_) + path;
  }
  int port() const { return port_; }

 private:
  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
};

}  // namespace linkstab::testing
