// Periodic re-ingestion with atomic snapshot publication.
#pragma once

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <stop_token>
#include <string>
#include <thread>

#include "atlas/store.hpp"

namespace atlas::store {

// Holds the currently served snapshot. Readers take one reference per
// request and keep using it even if a newer snapshot is published meanwhile.
class SnapshotSlot {
 public:
  std::shared_ptr<const Snapshot> current() const;
  void publish(std::shared_ptr<const Snapshot> snapshot);

 private:
  mutable std::mutex mu_;
  std::shared_ptr<const Snapshot> current_;
};

class SyncLoop {
 public:
  enum class TickResult { kUnchanged, kPublished, kFailed };

  // `interval` must be at least one second.
  SyncLoop(std::filesystem::path root, std::chrono::seconds interval, SnapshotSlot& slot);
  ~SyncLoop();

  SyncLoop(const SyncLoop&) = delete;
  SyncLoop& operator=(const SyncLoop&) = delete;

  // One synchronization step. The corpus is re-ingested only when its
  // digest differs from the last attempted one; a failed ingest leaves the
  // published snapshot untouched and bumps failures().
  TickResult tick();

  // Ticks immediately, then once per interval, until `stop` is requested.
  void run(std::stop_token stop);

  // run() on a background thread; stop() (or destruction) joins it.
  void start();
  void stop();

  std::uint64_t failures() const noexcept { return failures_.load(); }
  std::uint64_t publications() const noexcept { return publications_.load(); }
  std::chrono::seconds interval() const noexcept { return interval_; }

 private:
  std::filesystem::path root_;
  std::chrono::seconds interval_;
  SnapshotSlot& slot_;
  std::string last_attempt_;
  std::mutex tick_mu_;
  std::atomic<std::uint64_t> failures_{0};
  std::atomic<std::uint64_t> publications_{0};
  std::mutex wait_mu_;
  std::condition_variable_any wake_;
  std::jthread worker_;
};

}  // namespace atlas::store
