// reduction-atlas: serves a corpus over the JSON API.
//
// Settings come from flags, then ATLAS_* environment variables, then
// built-in defaults.

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include <atomic>
#include <chrono>
#include <csignal>
#include <iostream>
#include <thread>

#include "atlas/api.hpp"

namespace {

std::atomic<bool> g_stop{false};

extern "C" void on_signal(int) { g_stop.store(true); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reduction network compendium server"};
  app.set_version_flag("--version", "reduction-atlas 0.1.0");
  app.require_subcommand(1);

  std::string root;
  std::string listen = "127.0.0.1:8080";
  int sync_interval = 300;
  int rate_limit = 120;
  std::string static_dir;

  auto* serve = app.add_subcommand("serve", "Serve the corpus over HTTP");
  serve->add_option("--root", root, "Corpus root directory")->envname("ATLAS_ROOT")->required();
  serve->add_option("--listen", listen, "host:port to listen on")->envname("ATLAS_LISTEN")->capture_default_str();
  serve->add_option("--sync-interval", sync_interval, "Seconds between corpus syncs")
      ->envname("ATLAS_SYNC_INTERVAL")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  serve->add_option("--rate-limit", rate_limit, "Requests per minute per client address")
      ->envname("ATLAS_RATE_LIMIT")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  serve->add_option("--static", static_dir, "Directory of UI assets served at /")
      ->envname("ATLAS_STATIC_DIR")
      ->check(CLI::ExistingDirectory);

  CLI11_PARSE(app, argc, argv);

  try {
    atlas::api::ApiConfig config;
    std::tie(config.host, config.port) = atlas::api::parse_listen(listen);
    config.corpus_root = root;
    config.sync_interval = std::chrono::seconds(sync_interval);
    config.rate_limit = rate_limit;
    if (!static_dir.empty()) config.static_dir = static_dir;

    atlas::api::Server server(std::move(config));
    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    server.start();
    while (!g_stop.load()) {
      std::this_thread::sleep_for(std::chrono::milliseconds(200));
    }
    spdlog::info("shutting down");
    server.stop();
  } catch (const std::exception& e) {
    std::cerr << "reduction-atlas: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
