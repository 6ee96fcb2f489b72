#include "atlas/api.hpp"

#include <httplib.h>
#include <spdlog/spdlog.h>

#include <charconv>
#include <ctime>
#include <json.hpp>
#include <stdexcept>
#include <thread>
#include <vector>

namespace atlas::api {

using nlohmann::json;

namespace {

constexpr auto kSweepEvery = 1024;

// Request paths and queries are echoed in messages and may hold invalid UTF-8.
std::string dump(const json& body) { return body.dump(-1, ' ', false, json::error_handler_t::replace); }

Response error(int status, std::string_view code, const std::string& message) {
  return Response{status, dump(json{{"error", {{"code", code}, {"message", message}}}})};
}

Response ok(const json& body) { return Response{200, dump(body)}; }

template <typename Set>
json tag_array(const Set& tags) {
  auto out = json::array();
  for (const auto& t : tags) out.push_back(t.str());
  return out;
}

json problem_json(const Problem& p) {
  return json{{"slug", p.slug().str()},
              {"network", p.network().str()},
              {"name", p.name()},
              {"abbreviation", p.abbreviation()},
              {"alternative_names", p.alternative_names()},
              {"description", p.description()},
              {"completeness", tag_array(p.completeness())},
              {"references", p.references()}};
}

json reduction_json(const Reduction& r) {
  return json{{"slug", r.slug().str()},
              {"network", r.network().str()},
              {"from", r.from_problem().str()},
              {"to", r.to_problem().str()},
              {"description", r.description()},
              {"properties", tag_array(r.properties())},
              {"references", r.references()}};
}

json graph_json(const store::NetworkGraph& g) {
  auto nodes = json::array();
  for (const auto& n : g.nodes) {
    nodes.push_back({{"slug", n.slug.str()}, {"label", n.label}, {"tags", tag_array(n.tags)}});
  }
  auto edges = json::array();
  for (const auto& e : g.edges) {
    edges.push_back({{"slug", e.slug.str()}, {"from", e.from.str()}, {"to", e.to.str()}, {"tags", tag_array(e.tags)}});
  }
  return json{{"nodes", std::move(nodes)}, {"edges", std::move(edges)}};
}

std::string iso8601(std::chrono::system_clock::time_point tp) {
  const std::time_t t = std::chrono::system_clock::to_time_t(tp);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::vector<std::string> split_segments(std::string_view path) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= path.size()) {
    auto slash = path.find('/', start);
    if (slash == std::string_view::npos) slash = path.size();
    if (slash > start) out.emplace_back(path.substr(start, slash - start));
    start = slash + 1;
  }
  return out;
}

std::vector<std::string> split_list(const std::map<std::string, std::string>& params, const std::string& key) {
  std::vector<std::string> out;
  auto it = params.find(key);
  if (it == params.end()) return out;
  std::string_view rest = it->second;
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    auto item = rest.substr(0, comma);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    if (!item.empty()) out.emplace_back(item);
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  return out;
}

int status_for(store::StoreError::Code code) {
  switch (code) {
    case store::StoreError::Code::kUnknownTag:
    case store::StoreError::Code::kEmptyQuery:
      return 400;
    default:
      return 404;
  }
}

}  // namespace

void ApiConfig::validate() const {
  if (sync_interval < std::chrono::seconds(1)) throw std::invalid_argument("sync interval must be at least 1 second");
  if (rate_limit < 1) throw std::invalid_argument("rate limit must be at least 1 request per minute");
  if (port < 0 || port > 65535) throw std::invalid_argument("port out of range");
  if (corpus_root.empty()) throw std::invalid_argument("corpus root is required");
}

std::pair<std::string, int> parse_listen(std::string_view listen) {
  const auto colon = listen.rfind(':');
  if (colon == std::string_view::npos || colon == 0) {
    throw std::invalid_argument("listen address must be host:port, got '" + std::string(listen) + "'");
  }
  int port = -1;
  const auto digits = listen.substr(colon + 1);
  const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), port);
  if (ec != std::errc() || ptr != digits.data() + digits.size() || port < 0 || port > 65535) {
    throw std::invalid_argument("invalid port in listen address '" + std::string(listen) + "'");
  }
  return {std::string(listen.substr(0, colon)), port};
}

RateLimiter::RateLimiter(int limit, Clock::duration window, NowFn now)
    : limit_(limit), window_(window), now_(std::move(now)) {
  if (limit_ < 1) throw std::invalid_argument("rate limit must be at least 1");
}

bool RateLimiter::allow(const std::string& client) {
  const auto now = now_();
  std::lock_guard lock(mu_);
  if (++calls_ % kSweepEvery == 0) sweep(now);
  auto& hits = hits_[client];
  while (!hits.empty() && now - hits.front() >= window_) hits.pop_front();
  if (hits.size() >= static_cast<std::size_t>(limit_)) return false;
  hits.push_back(now);
  return true;
}

void RateLimiter::sweep(Clock::time_point now) {
  std::erase_if(hits_, [&](const auto& kv) { return kv.second.empty() || now - kv.second.back() >= window_; });
}

Handler::Handler(const store::SnapshotSlot& slot, RateLimiter& limiter, std::function<std::uint64_t()> sync_failures)
    : slot_(slot), limiter_(limiter), sync_failures_(std::move(sync_failures)) {}

Response Handler::handle(const Request& request) const {
  if (!limiter_.allow(request.client)) {
    return error(429, "rate-limited", "too many requests from " + request.client);
  }
  try {
    return route(request);
  } catch (const store::StoreError& e) {
    return error(status_for(e.code()), store::to_token(e.code()), e.what());
  }
}

Response Handler::route(const Request& request) const {
  const auto seg = split_segments(request.path);
  if (seg.size() < 2 || seg[0] != "api") {
    return error(404, "not-found", "no such endpoint: " + request.path);
  }
  const auto snapshot = slot_.current();

  if (seg.size() == 2 && seg[1] == "health") {
    const std::uint64_t failures = sync_failures_ ? sync_failures_() : 0;
    if (!snapshot) {
      return Response{503, dump({{"status", "unavailable"},
                                 {"snapshot_digest", nullptr},
                                 {"ingested_at", nullptr},
                                 {"sync_failures", failures}})};
    }
    return ok({{"status", "ok"},
               {"snapshot_digest", snapshot->corpus_digest()},
               {"ingested_at", iso8601(snapshot->ingested_at())},
               {"sync_failures", failures}});
  }
  if (seg[1] != "networks") {
    return error(404, "not-found", "no such endpoint: " + request.path);
  }
  if (!snapshot) {
    return error(503, "snapshot-unavailable", "no corpus snapshot has been published yet");
  }

  if (seg.size() == 2) {
    auto list = json::array();
    for (const auto& [id, data] : snapshot->networks()) {
      list.push_back({{"id", id.str()},
                      {"display_name", data.manifest.display_name},
                      {"problem_count", data.problems.size()},
                      {"reduction_count", data.reductions.size()},
                      {"problem_tags", tag_array(data.manifest.problem_tags)},
                      {"reduction_tags", tag_array(data.manifest.reduction_tags)}});
    }
    return ok(list);
  }

  const std::string& net_raw = seg[2];
  const NetworkId net = snapshot->network(net_raw).manifest.network;

  if (seg.size() == 4 && seg[3] == "graph") {
    const auto filter =
        store::make_filter(*snapshot, net_raw, split_list(request.params, "problem_tags"),
                           split_list(request.params, "reduction_tags"));
    return ok(graph_json(store::network_graph(*snapshot, net, filter)));
  }
  if (seg.size() == 4 && seg[3] == "search") {
    auto q = request.params.find("q");
    const auto hits = store::search(*snapshot, net, q == request.params.end() ? std::string_view() : q->second);
    auto list = json::array();
    for (const auto& h : hits) {
      list.push_back({{"slug", h.slug.str()}, {"matched_name", h.matched_name}, {"rank_class", store::to_token(h.rank)}});
    }
    return ok(list);
  }
  if (seg.size() == 5 && seg[3] == "problems") {
    const auto detail = store::problem_detail(*snapshot, net, seg[4]);
    auto incident = json::array();
    for (const auto& r : detail.incident) incident.push_back(reduction_json(r));
    return ok({{"problem", problem_json(detail.problem)}, {"incident_reductions", std::move(incident)}});
  }
  if (seg.size() == 5 && seg[3] == "reductions") {
    const auto detail = store::reduction_detail(*snapshot, net, seg[4]);
    return ok({{"reduction", reduction_json(detail.reduction)},
               {"from_problem", problem_json(detail.from)},
               {"to_problem", problem_json(detail.to)}});
  }
  return error(404, "not-found", "no such endpoint: " + request.path);
}

struct Server::Impl {
  explicit Impl(ApiConfig cfg)
      : config(std::move(cfg)),
        limiter(config.rate_limit),
        sync(config.corpus_root, config.sync_interval, slot),
        handler(slot, limiter, [this] { return sync.failures(); }) {}

  ApiConfig config;
  store::SnapshotSlot slot;
  RateLimiter limiter;
  store::SyncLoop sync;
  Handler handler;
  httplib::Server http;
  std::thread listener;
};

Server::Server(ApiConfig config) {
  config.validate();
  impl_ = std::make_unique<Impl>(std::move(config));

  impl_->http.Get(R"(/api(/.*)?)", [this](const httplib::Request& req, httplib::Response& res) {
    Request request{req.path, {}, req.remote_addr};
    for (const auto& [key, value] : req.params) request.params.emplace(key, value);
    const Response out = impl_->handler.handle(request);
    res.status = out.status;
    res.set_content(out.body, std::string(kJsonContentType));
  });
  if (impl_->config.static_dir) {
    if (!impl_->http.set_mount_point("/", impl_->config.static_dir->string())) {
      throw std::invalid_argument("static directory '" + impl_->config.static_dir->string() + "' does not exist");
    }
  }
}

Server::~Server() { stop(); }

int Server::start(bool background_sync) {
  auto& http = impl_->http;
  int port = impl_->config.port;
  if (port == 0) {
    port = http.bind_to_any_port(impl_->config.host);
  } else if (!http.bind_to_port(impl_->config.host, port)) {
    port = -1;
  }
  if (port <= 0) {
    throw std::runtime_error("cannot bind " + impl_->config.host + ":" + std::to_string(impl_->config.port));
  }
  impl_->listener = std::thread([&http] { http.listen_after_bind(); });
  if (background_sync) impl_->sync.start();
  spdlog::info("serving {} on {}:{}", impl_->config.corpus_root.string(), impl_->config.host, port);
  return port;
}

void Server::wait() {
  if (impl_->listener.joinable()) impl_->listener.join();
}

void Server::stop() {
  if (!impl_) return;
  impl_->sync.stop();
  impl_->http.stop();
  wait();
}

store::SnapshotSlot& Server::slot() noexcept { return impl_->slot; }
store::SyncLoop& Server::sync() noexcept { return impl_->sync; }

}  // namespace atlas::api
