// Read-only JSON API over the graph store.
//
//   GET /api/networks
//   GET /api/networks/{net}/graph?problem_tags=a,b&reduction_tags=c
//   GET /api/networks/{net}/problems/{slug}
//   GET /api/networks/{net}/reductions/{slug}
//   GET /api/networks/{net}/search?q=...
//   GET /api/health
//
// Errors are {"error":{"code","message"}} with a matching HTTP status.
#pragma once

#include <chrono>
#include <cstdint>
#include <deque>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>

#include "atlas/sync.hpp"

namespace atlas::api {

inline constexpr std::string_view kJsonContentType = "application/json; charset=utf-8";

struct ApiConfig {
  std::string host = "127.0.0.1";
  int port = 8080;  // 0 binds an ephemeral port
  std::filesystem::path corpus_root;
  std::chrono::seconds sync_interval{300};
  int rate_limit = 120;  // requests per minute per client address
  std::optional<std::filesystem::path> static_dir;

  // Throws std::invalid_argument on out-of-range values.
  void validate() const;
};

// Splits "host:port". Throws std::invalid_argument.
std::pair<std::string, int> parse_listen(std::string_view listen);

// Sliding-window limiter keyed by client address. Only admitted requests
// count toward the window, so a rejected client is readmitted as soon as
// its oldest admitted request is a full window old.
class RateLimiter {
 public:
  using Clock = std::chrono::steady_clock;
  using NowFn = std::function<Clock::time_point()>;

  explicit RateLimiter(int limit, Clock::duration window = std::chrono::minutes(1), NowFn now = &Clock::now);

  bool allow(const std::string& client);

 private:
  void sweep(Clock::time_point now);

  int limit_;
  Clock::duration window_;
  NowFn now_;
  std::mutex mu_;
  std::unordered_map<std::string, std::deque<Clock::time_point>> hits_;
  std::uint64_t calls_ = 0;
};

struct Request {
  std::string path;
  std::map<std::string, std::string> params;  // decoded query parameters
  std::string client;
};

struct Response {
  int status = 200;
  std::string body;
};

// Transport-independent request handling; the HTTP server is a thin
// adapter around this.
class Handler {
 public:
  Handler(const store::SnapshotSlot& slot, RateLimiter& limiter, std::function<std::uint64_t()> sync_failures);

  Response handle(const Request& request) const;

 private:
  Response route(const Request& request) const;

  const store::SnapshotSlot& slot_;
  RateLimiter& limiter_;
  std::function<std::uint64_t()> sync_failures_;
};

// HTTP front end: owns the snapshot slot, sync loop, rate limiter and the
// listening socket.
class Server {
 public:
  explicit Server(ApiConfig config);
  ~Server();

  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  // Binds the socket and starts serving on a background thread. With
  // `background_sync` the sync loop starts too (first tick immediately);
  // otherwise callers drive sync().tick() themselves. Returns the bound port.
  int start(bool background_sync = true);

  // Blocks until stop() is called from another thread or a signal handler.
  void wait();
  void stop();

  store::SnapshotSlot& slot() noexcept;
  store::SyncLoop& sync() noexcept;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace atlas::api
