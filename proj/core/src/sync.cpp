#include "atlas/sync.hpp"

#include <spdlog/spdlog.h>

#include "atlas/digest.hpp"

namespace atlas::store {

std::shared_ptr<const Snapshot> SnapshotSlot::current() const {
  std::lock_guard lock(mu_);
  return current_;
}

void SnapshotSlot::publish(std::shared_ptr<const Snapshot> snapshot) {
  std::lock_guard lock(mu_);
  current_ = std::move(snapshot);
}

SyncLoop::SyncLoop(std::filesystem::path root, std::chrono::seconds interval, SnapshotSlot& slot)
    : root_(std::move(root)), interval_(interval), slot_(slot) {
  if (interval_ < std::chrono::seconds(1)) {
    throw std::invalid_argument("sync interval must be at least 1 second");
  }
}

SyncLoop::~SyncLoop() { stop(); }

SyncLoop::TickResult SyncLoop::tick() {
  std::lock_guard lock(tick_mu_);
  std::string digest;
  try {
    digest = corpus_digest(root_);
  } catch (const lint::IoError& e) {
    const std::string marker = std::string("io-error:") + e.what();
    if (marker == last_attempt_) {
      return TickResult::kUnchanged;
    }
    last_attempt_ = marker;
    ++failures_;
    spdlog::error("sync: cannot read corpus: {}", e.what());
    return TickResult::kFailed;
  }
  if (digest == last_attempt_) {
    return TickResult::kUnchanged;
  }
  last_attempt_ = digest;
  try {
    auto scan = lint::scan_corpus(root_);
    // The tree may have changed between digesting and scanning; remember
    // what was actually ingested so the next tick notices.
    last_attempt_ = scan.digest;
    auto snapshot = std::make_shared<const Snapshot>(build_snapshot(std::move(scan)));
    slot_.publish(snapshot);
    ++publications_;
    spdlog::info("sync: published snapshot {} ({} networks)", snapshot->corpus_digest().substr(0, 12),
                 snapshot->networks().size());
    return TickResult::kPublished;
  } catch (const ValidationFailed& e) {
    ++failures_;
    spdlog::error("sync: corpus rejected, keeping previous snapshot\n{}", lint::to_human(e.report()));
  } catch (const lint::IoError& e) {
    ++failures_;
    spdlog::error("sync: cannot read corpus: {}", e.what());
  }
  return TickResult::kFailed;
}

void SyncLoop::run(std::stop_token stop) {
  while (!stop.stop_requested()) {
    tick();
    std::unique_lock lock(wait_mu_);
    wake_.wait_for(lock, stop, interval_, [] { return false; });
  }
}

void SyncLoop::start() {
  if (worker_.joinable()) {
    return;
  }
  worker_ = std::jthread([this](std::stop_token stop) { run(stop); });
}

void SyncLoop::stop() {
  if (worker_.joinable()) {
    worker_.request_stop();
    worker_.join();
  }
}

}  // namespace atlas::store
