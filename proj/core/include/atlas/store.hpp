// Immutable, indexed corpus snapshots and the read queries served from them.
#pragma once

#include <chrono>
#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "atlas/model.hpp"
#include "atlas/validator.hpp"

namespace atlas::store {

class StoreError : public std::runtime_error {
 public:
  enum class Code { kUnknownNetwork, kUnknownTag, kUnknownProblem, kUnknownReduction, kEmptyQuery };

  StoreError(Code code, std::string subject, const std::string& message)
      : std::runtime_error(message), code_(code), subject_(std::move(subject)) {}

  Code code() const noexcept { return code_; }
  const std::string& subject() const noexcept { return subject_; }

 private:
  Code code_;
  std::string subject_;
};

// "unknown-network", "unknown-tag", ...
std::string_view to_token(StoreError::Code code) noexcept;

// Raised by ingest() when the corpus has validation errors.
class ValidationFailed : public std::runtime_error {
 public:
  explicit ValidationFailed(lint::ValidationReport report);

  const lint::ValidationReport& report() const noexcept { return report_; }

 private:
  lint::ValidationReport report_;
};

enum class RankClass { kExactName = 0, kExactAlternative = 1, kPrefix = 2, kSubstring = 3 };

std::string_view to_token(RankClass rank) noexcept;

struct SearchHit {
  Slug slug;
  std::string matched_name;
  RankClass rank;

  friend bool operator==(const SearchHit&, const SearchHit&) = default;
};

// Case-insensitive (ASCII) lookup over main and alternative names.
class NameIndex {
 public:
  NameIndex() = default;
  explicit NameIndex(const std::map<Slug, Problem>& problems);

  // Best rank per problem; ordered by rank class, then slug.
  std::vector<SearchHit> search(std::string_view query) const;

 private:
  struct Entry {
    Slug slug;
    std::string name;
    std::string folded;
    bool alternative;
  };
  std::vector<Entry> entries_;
};

struct Incidence {
  std::vector<Slug> outgoing;  // slug-sorted
  std::vector<Slug> incoming;  // slug-sorted
};

struct NetworkData {
  NetworkManifest manifest;
  std::map<Slug, Problem> problems;
  std::map<Slug, Reduction> reductions;
  std::map<Slug, Incidence> adjacency;  // one entry per problem
  NameIndex name_index;
};

class Snapshot {
 public:
  using Clock = std::chrono::system_clock;

  Snapshot(std::map<NetworkId, NetworkData> networks, Clock::time_point ingested_at, std::string corpus_digest);

  const std::map<NetworkId, NetworkData>& networks() const noexcept { return networks_; }
  // Throws StoreError(kUnknownNetwork).
  const NetworkData& network(const NetworkId& id) const;
  const NetworkData& network(std::string_view id) const;

  Clock::time_point ingested_at() const noexcept { return ingested_at_; }
  const std::string& corpus_digest() const noexcept { return corpus_digest_; }

 private:
  std::map<NetworkId, NetworkData> networks_;
  Clock::time_point ingested_at_;
  std::string corpus_digest_;
};

// Builds a snapshot from a clean scan. Throws ValidationFailed when the
// scan's report has errors.
Snapshot build_snapshot(lint::CorpusScan scan, Snapshot::Clock::time_point ingested_at = Snapshot::Clock::now());

// Throws ValidationFailed or lint::IoError.
Snapshot ingest(const std::filesystem::path& root);

struct GraphNode {
  Slug slug;
  std::string label;
  ProblemTagSet tags;

  friend bool operator==(const GraphNode&, const GraphNode&) = default;
};

struct GraphEdge {
  Slug slug;
  Slug from;
  Slug to;
  ReductionTagSet tags;

  friend bool operator==(const GraphEdge&, const GraphEdge&) = default;
};

// Nodes and edges, each slug-sorted.
struct NetworkGraph {
  std::vector<GraphNode> nodes;
  std::vector<GraphEdge> edges;

  friend bool operator==(const NetworkGraph&, const NetworkGraph&) = default;
};

// Converts raw tag strings into a FilterSpec for `net`. Tags that are not
// in the network vocabulary (including lexically invalid ones) throw
// StoreError(kUnknownTag).
FilterSpec make_filter(const Snapshot& snapshot, std::string_view net, const std::vector<std::string>& problem_tags,
                       const std::vector<std::string>& reduction_tags);

// Sub-network selected by `filter`.
//
// A problem is *tagged* when its completeness set contains every selected
// problem tag (all problems are tagged when none are selected). An edge is
// kept when it carries every selected reduction tag and at least one of its
// endpoints is tagged. Nodes are the tagged problems plus the endpoints of
// kept edges. Growing either tag set never adds edges.
NetworkGraph network_graph(const Snapshot& snapshot, const NetworkId& net, const FilterSpec& filter);

// Throws StoreError(kEmptyQuery) for blank queries.
std::vector<SearchHit> search(const Snapshot& snapshot, const NetworkId& net, std::string_view query);

struct ProblemDetail {
  Problem problem;
  std::vector<Reduction> incident;  // outgoing first, then incoming; each slug-sorted
};

struct ReductionDetail {
  Reduction reduction;
  Problem from;
  Problem to;
};

ProblemDetail problem_detail(const Snapshot& snapshot, const NetworkId& net, std::string_view slug);
ReductionDetail reduction_detail(const Snapshot& snapshot, const NetworkId& net, std::string_view slug);

}  // namespace atlas::store
