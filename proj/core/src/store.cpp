#include "atlas/store.hpp"

#include <algorithm>
#include <cctype>
#include <set>

namespace atlas::store {

namespace {

std::string fold(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::string_view trim(std::string_view s) {
  constexpr std::string_view ws = " \t\r\n\f\v";
  const auto first = s.find_first_not_of(ws);
  if (first == std::string_view::npos) return {};
  return s.substr(first, s.find_last_not_of(ws) - first + 1);
}

template <typename Map>
const auto& lookup(const Map& map, std::string_view raw, StoreError::Code code, const char* what) {
  if (is_kebab_token(raw)) {
    if (auto it = map.find(typename Map::key_type(std::string(raw))); it != map.end()) {
      return it->second;
    }
  }
  throw StoreError(code, std::string(raw), std::string("unknown ") + what + " '" + std::string(raw) + "'");
}

template <typename Set>
bool includes_all(const Set& have, const Set& wanted) {
  return std::includes(have.begin(), have.end(), wanted.begin(), wanted.end());
}

}  // namespace

std::string_view to_token(StoreError::Code code) noexcept {
  switch (code) {
    case StoreError::Code::kUnknownNetwork: return "unknown-network";
    case StoreError::Code::kUnknownTag: return "unknown-tag";
    case StoreError::Code::kUnknownProblem: return "unknown-problem";
    case StoreError::Code::kUnknownReduction: return "unknown-reduction";
    case StoreError::Code::kEmptyQuery: return "empty-query";
  }
  return "unknown";
}

std::string_view to_token(RankClass rank) noexcept {
  switch (rank) {
    case RankClass::kExactName: return "exact-name";
    case RankClass::kExactAlternative: return "exact-alternative";
    case RankClass::kPrefix: return "prefix";
    case RankClass::kSubstring: return "substring";
  }
  return "unknown";
}

ValidationFailed::ValidationFailed(lint::ValidationReport report)
    : std::runtime_error("corpus has " + std::to_string(report.errors()) + " validation error(s)"),
      report_(std::move(report)) {}

NameIndex::NameIndex(const std::map<Slug, Problem>& problems) {
  for (const auto& [slug, problem] : problems) {
    entries_.push_back(Entry{slug, problem.name(), fold(problem.name()), false});
    for (const auto& alt : problem.alternative_names()) {
      entries_.push_back(Entry{slug, alt, fold(alt), true});
    }
  }
}

std::vector<SearchHit> NameIndex::search(std::string_view query) const {
  const std::string needle = fold(trim(query));
  if (needle.empty()) {
    return {};
  }
  // Entries are grouped by slug with the main name first, so the first
  // entry reaching a rank wins ties within that rank.
  std::map<Slug, SearchHit> best;
  for (const auto& e : entries_) {
    RankClass rank;
    if (e.folded == needle) {
      rank = e.alternative ? RankClass::kExactAlternative : RankClass::kExactName;
    } else if (e.folded.starts_with(needle)) {
      rank = RankClass::kPrefix;
    } else if (e.folded.find(needle) != std::string::npos) {
      rank = RankClass::kSubstring;
    } else {
      continue;
    }
    auto it = best.find(e.slug);
    if (it == best.end()) {
      best.emplace(e.slug, SearchHit{e.slug, e.name, rank});
    } else if (rank < it->second.rank) {
      it->second = SearchHit{e.slug, e.name, rank};
    }
  }
  std::vector<SearchHit> hits;
  hits.reserve(best.size());
  for (auto& [slug, hit] : best) hits.push_back(std::move(hit));
  std::stable_sort(hits.begin(), hits.end(), [](const SearchHit& a, const SearchHit& b) { return a.rank < b.rank; });
  return hits;
}

Snapshot::Snapshot(std::map<NetworkId, NetworkData> networks, Clock::time_point ingested_at, std::string corpus_digest)
    : networks_(std::move(networks)), ingested_at_(ingested_at), corpus_digest_(std::move(corpus_digest)) {}

const NetworkData& Snapshot::network(const NetworkId& id) const { return network(std::string_view(id.str())); }

const NetworkData& Snapshot::network(std::string_view id) const {
  return lookup(networks_, id, StoreError::Code::kUnknownNetwork, "network");
}

Snapshot build_snapshot(lint::CorpusScan scan, Snapshot::Clock::time_point ingested_at) {
  if (!scan.report.publishable()) {
    throw ValidationFailed(std::move(scan.report));
  }
  std::map<NetworkId, NetworkData> networks;
  for (auto& scanned : scan.networks) {
    if (!scanned.manifest) {
      throw std::logic_error("clean scan without manifest for network '" + scanned.id.str() + "'");
    }
    NetworkData data{std::move(*scanned.manifest), {}, {}, {}, {}};
    for (auto& p : scanned.problems) {
      data.adjacency[p.slug()];
      data.problems.emplace(p.slug(), std::move(p));
    }
    for (auto& r : scanned.reductions) {
      auto from = data.adjacency.find(r.from_problem());
      auto to = data.adjacency.find(r.to_problem());
      if (from == data.adjacency.end() || to == data.adjacency.end()) {
        throw std::logic_error("clean scan with dangling reduction '" + r.slug().str() + "'");
      }
      from->second.outgoing.push_back(r.slug());
      to->second.incoming.push_back(r.slug());
      data.reductions.emplace(r.slug(), std::move(r));
    }
    for (auto& [slug, inc] : data.adjacency) {
      std::sort(inc.outgoing.begin(), inc.outgoing.end());
      std::sort(inc.incoming.begin(), inc.incoming.end());
    }
    data.name_index = NameIndex(data.problems);
    const NetworkId id = data.manifest.network;
    networks.emplace(id, std::move(data));
  }
  return Snapshot(std::move(networks), ingested_at, std::move(scan.digest));
}

Snapshot ingest(const std::filesystem::path& root) { return build_snapshot(lint::scan_corpus(root)); }

FilterSpec make_filter(const Snapshot& snapshot, std::string_view net, const std::vector<std::string>& problem_tags,
                       const std::vector<std::string>& reduction_tags) {
  const NetworkData& data = snapshot.network(net);
  FilterSpec filter;
  auto reject = [](const std::string& tag) -> void {
    throw StoreError(StoreError::Code::kUnknownTag, tag, "unknown tag '" + tag + "'");
  };
  for (const auto& raw : problem_tags) {
    if (!is_kebab_token(raw) || !data.manifest.problem_tags.contains(ProblemTag(raw))) reject(raw);
    filter.problem_tags.emplace(raw);
  }
  for (const auto& raw : reduction_tags) {
    if (!is_kebab_token(raw) || !data.manifest.reduction_tags.contains(ReductionTag(raw))) reject(raw);
    filter.reduction_tags.emplace(raw);
  }
  return filter;
}

NetworkGraph network_graph(const Snapshot& snapshot, const NetworkId& net, const FilterSpec& filter) {
  const NetworkData& data = snapshot.network(net);
  for (const auto& tag : filter.problem_tags) {
    if (!data.manifest.problem_tags.contains(tag)) {
      throw StoreError(StoreError::Code::kUnknownTag, tag.str(), "unknown problem tag '" + tag.str() + "'");
    }
  }
  for (const auto& tag : filter.reduction_tags) {
    if (!data.manifest.reduction_tags.contains(tag)) {
      throw StoreError(StoreError::Code::kUnknownTag, tag.str(), "unknown reduction tag '" + tag.str() + "'");
    }
  }

  std::set<Slug> tagged;
  for (const auto& [slug, problem] : data.problems) {
    if (includes_all(problem.completeness(), filter.problem_tags)) {
      tagged.insert(slug);
    }
  }

  NetworkGraph graph;
  std::set<Slug> nodes = tagged;
  for (const auto& [slug, r] : data.reductions) {
    if (!includes_all(r.properties(), filter.reduction_tags)) continue;
    if (!tagged.contains(r.from_problem()) && !tagged.contains(r.to_problem())) continue;
    nodes.insert(r.from_problem());
    nodes.insert(r.to_problem());
    graph.edges.push_back(GraphEdge{slug, r.from_problem(), r.to_problem(), r.properties()});
  }
  for (const auto& slug : nodes) {
    const Problem& p = data.problems.at(slug);
    graph.nodes.push_back(GraphNode{slug, p.abbreviation(), p.completeness()});
  }
  return graph;
}

std::vector<SearchHit> search(const Snapshot& snapshot, const NetworkId& net, std::string_view query) {
  const NetworkData& data = snapshot.network(net);
  if (trim(query).empty()) {
    throw StoreError(StoreError::Code::kEmptyQuery, {}, "search query is empty");
  }
  return data.name_index.search(query);
}

ProblemDetail problem_detail(const Snapshot& snapshot, const NetworkId& net, std::string_view slug) {
  const NetworkData& data = snapshot.network(net);
  const Problem& problem = lookup(data.problems, slug, StoreError::Code::kUnknownProblem, "problem");
  ProblemDetail detail{problem, {}};
  const Incidence& inc = data.adjacency.at(problem.slug());
  for (const auto& r : inc.outgoing) detail.incident.push_back(data.reductions.at(r));
  for (const auto& r : inc.incoming) detail.incident.push_back(data.reductions.at(r));
  return detail;
}

ReductionDetail reduction_detail(const Snapshot& snapshot, const NetworkId& net, std::string_view slug) {
  const NetworkData& data = snapshot.network(net);
  const Reduction& r = lookup(data.reductions, slug, StoreError::Code::kUnknownReduction, "reduction");
  return ReductionDetail{r, data.problems.at(r.from_problem()), data.problems.at(r.to_problem())};
}

}  // namespace atlas::store
