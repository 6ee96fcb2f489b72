// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.

#include <httplib.h>
#include <spdlog/spdlog.h>

#include <chrono>
#include <functional>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "atlas/api.hpp"
#include "atlas/codec.hpp"
#include "atlas/store.hpp"
#include "atlas/sync.hpp"
#include "atlas/validator.hpp"
#include "generators.hpp"
#include "golden.hpp"
#include "oracle.hpp"
#include "temp_corpus.hpp"

using namespace atlas;
using namespace std::chrono_literals;
using nlohmann::json;
using testutil::FixtureCopy;
using testutil::write_file;

namespace {

struct Failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void expect(bool ok, const std::string& what) {
  if (!ok) throw Failure(what);
}

std::string join(const std::set<std::string>& s, const char* sep = ",") {
  std::string out;
  for (const auto& t : s) out += (out.empty() ? "" : sep) + t;
  return out;
}

std::string show(const std::set<std::string>& s) { return "{" + join(s, ", ") + "}"; }

FilterSpec spec(const std::set<std::string>& p, const std::set<std::string>& r) {
  FilterSpec f;
  for (const auto& t : p) f.problem_tags.emplace(t);
  for (const auto& t : r) f.reduction_tags.emplace(t);
  return f;
}

oracle::RawGraph as_raw(const store::NetworkGraph& g) {
  oracle::RawGraph out;
  for (const auto& n : g.nodes) out.nodes.insert(n.slug.str());
  for (const auto& e : g.edges) out.edges.insert(e.slug.str());
  return out;
}

std::vector<std::string> error_codes(const lint::ValidationReport& r) {
  std::vector<std::string> out;
  for (const auto& f : r.findings()) {
    if (f.severity == lint::Severity::kError) out.push_back(f.code);
  }
  return out;
}

// 1. parse(serialize(x)) == x for generated values, within the time budget.
std::string codec_round_trip() {
  testutil::ValueGen gen(500);
  const auto start = std::chrono::steady_clock::now();
  for (int i = 0; i < 500; ++i) {
    const Problem p = gen.problem();
    const auto text = codec::serialize_problem(p);
    expect(codec::parse_problem(codec::parse_document(text), p.slug(), p.network()).value == p,
           "problem mismatch after round-trip:\n" + text);
    const Reduction r = gen.reduction();
    const auto rtext = codec::serialize_reduction(r);
    expect(codec::parse_reduction(codec::parse_document(rtext), r.slug(), r.network()).value == r,
           "reduction mismatch after round-trip:\n" + rtext);
  }
  const std::chrono::duration<double> took = std::chrono::steady_clock::now() - start;
  expect(took < 5s, "took " + std::to_string(took.count()) + " s");
  std::ostringstream out;
  out << "500 problems + 500 reductions in " << took.count() << " s";
  return out.str();
}

// 2. The one-field example document, byte for byte.
std::string format_compliance() {
  for (const std::string doc : {"# name\nVertex Cover\n", "# name\nVertex Cover"}) {
    const auto fields = codec::parse_document(doc);
    expect(fields.size() == 1, "expected exactly one field");
    const auto& e = fields.entries()[0];
    expect(e.key == std::string("name", 4), "key bytes differ");
    expect(e.value == std::string("Vertex Cover", 12), "value bytes differ: '" + e.value + "'");
  }
  const Problem p(ProblemFields{Slug("vertex-cover"), NetworkId("classic"), "Vertex Cover", "VC", {}, "", {}, ""});
  const auto text = codec::serialize_problem(p);
  expect(text.rfind("# name\nVertex Cover\n", 0) == 0, "serializer output does not start with the example");
  return "one field (name, Vertex Cover)";
}

// 3. One seeded defect per class yields exactly one matching error.
std::string validator_completeness() {
  expect(lint::validate_corpus(testutil::fixture_root()).findings().empty(), "clean fixture has findings");

  const std::vector<std::pair<std::string, std::function<void(const FixtureCopy&)>>> defects = {
      {"missing-field", [](const FixtureCopy& c) { write_file(c / "classic/problems/clique.md", "# name\nClique\n"); }},
      {"duplicate-field",
       [](const FixtureCopy& c) {
         write_file(c / "classic/problems/clique.md", "# name\nClique\n\n# abbreviation\nCLQ\n\n# name\nClique\n");
       }},
      {"duplicate-slug",
       [](const FixtureCopy& c) {
         write_file(c / "classic/problems/clique.MD", testutil::read_file(c / "classic/problems/clique.md"));
       }},
      {"dangling-endpoint",
       [](const FixtureCopy& c) {
         write_file(c / "classic/reductions/clique-to-ghost.md", "# from\nclique\n\n# to\nghost\n");
       }},
      {"unknown-tag",
       [](const FixtureCopy& c) {
         write_file(c / "classic/problems/clique.md",
                    "# name\nClique\n\n# abbreviation\nCLQ\n\n# complexity\npspace-complete\n");
       }},
      {"bad-directory", [](const FixtureCopy& c) { std::filesystem::create_directories(c / "classic/extras"); }},
  };
  for (const auto& [code, seed] : defects) {
    FixtureCopy corpus;
    seed(corpus);
    const auto errors = error_codes(lint::validate_corpus(corpus.path()));
    expect(errors == std::vector<std::string>{code},
           code + ": got [" + join(std::set<std::string>(errors.begin(), errors.end())) + "]");
  }
  return "6 defect classes, clean fixture has 0 findings";
}

// Random corpus mutations, a mix of errors, warnings and harmless edits.
void mutate(const FixtureCopy& c, testutil::ValueGen& gen, int serial) {
  static const std::vector<std::string> nets = {"classic", "parameterized", "approximation"};
  const std::string net = nets[gen.uniform(0, 2)];
  std::vector<std::filesystem::path> problems;
  for (const auto& e : std::filesystem::directory_iterator(c / (net + "/problems"))) {
    if (e.path().extension() == ".md") problems.push_back(e.path());
  }
  std::sort(problems.begin(), problems.end());
  if (problems.empty()) {
    write_file(c / (net + "/problems/item-" + std::to_string(serial) + ".md"), "# name\nRefill\n\n# abbreviation\nRF\n");
    return;
  }
  const auto target = problems[gen.uniform(0, static_cast<int>(problems.size()) - 1)];
  const std::string fresh = "item-" + std::to_string(serial);
  const std::string existing = target.stem().string();

  switch (gen.uniform(0, 11)) {
    case 0:  // missing field
      write_file(target, "# name\nOnly A Name\n");
      break;
    case 1:  // duplicate field
      write_file(target, testutil::read_file(target) + "\n# abbreviation\nDUP\n");
      break;
    case 2:  // duplicate slug
      write_file(target.parent_path() / (existing + ".Md"), testutil::read_file(target));
      break;
    case 3:  // dangling endpoint
      write_file(c / (net + "/reductions/" + fresh + ".md"), "# from\n" + existing + "\n\n# to\nghost-" + fresh + "\n");
      break;
    case 4:  // unknown tag
      write_file(c / (net + "/problems/" + fresh + ".md"),
                 "# name\nFresh\n\n# abbreviation\nFR\n\n# complexity\nundecidable\n");
      break;
    case 5:  // bad directory
      std::filesystem::create_directories(c / (net + "/" + fresh));
      break;
    case 6:  // self loop
      write_file(c / (net + "/reductions/" + fresh + ".md"), "# from\n" + existing + "\n\n# to\n" + existing + "\n");
      break;
    case 7:  // removed problem; its reductions now dangle
      std::filesystem::remove(target);
      break;
    case 8:  // warning: stray file
      write_file(c / (net + "/problems/" + fresh + ".txt"), "notes");
      break;
    case 9:  // warning: unknown field
      write_file(c / (net + "/problems/" + fresh + ".md"), "# name\nFresh\n\n# abbreviation\nFR\n\n# video\nx\n");
      break;
    case 10:  // harmless: new isolated problem
      write_file(c / (net + "/problems/" + fresh + ".md"), "# name\nFresh " + fresh + "\n\n# abbreviation\nFR\n");
      break;
    default:  // harmless: new valid reduction
      write_file(c / (net + "/reductions/" + fresh + ".md"),
                 "# from\n" + existing + "\n\n# to\n" + problems[0].stem().string() + "\n");
      if (problems[0] == target) std::filesystem::remove(c / (net + "/reductions/" + fresh + ".md"));
      break;
  }
}

// 4. validate_corpus has no errors exactly when ingest succeeds.
std::string validator_ingest_agreement() {
  testutil::ValueGen gen(4);
  int clean = 0;
  int rejected = 0;
  int serial = 0;
  for (int i = 0; i < 50; ++i) {
    FixtureCopy corpus;
    const int k = gen.uniform(0, 3);
    for (int j = 0; j < k; ++j) mutate(corpus, gen, serial++);
    const bool valid = lint::validate_corpus(corpus.path()).errors() == 0;
    bool ingested = true;
    try {
      store::ingest(corpus.path());
    } catch (const store::ValidationFailed&) {
      ingested = false;
    }
    expect(valid == ingested, "corpus " + std::to_string(i) + ": validate " + (valid ? "clean" : "errors") +
                                  " but ingest " + (ingested ? "succeeded" : "failed"));
    (valid ? clean : rejected)++;
  }
  expect(clean > 0 && rejected > 0, "random corpora did not cover both outcomes");
  return "50 corpora (" + std::to_string(clean) + " accepted, " + std::to_string(rejected) + " rejected)";
}

const store::Snapshot& fixture_snapshot() {
  static const store::Snapshot s = store::ingest(testutil::fixture_root());
  return s;
}

const oracle::RawNetwork& raw_classic() {
  static const auto corpus = oracle::read_corpus(testutil::fixture_root());
  return corpus.at("classic");
}

// 5. Every filter over the classic vocabularies matches the brute-force oracle.
std::string filter_oracle() {
  const auto& raw = raw_classic();
  const NetworkId net("classic");
  int count = 0;
  for (const auto& P : oracle::power_set(raw.problem_tags)) {
    for (const auto& R : oracle::power_set(raw.reduction_tags)) {
      const auto got = as_raw(store::network_graph(fixture_snapshot(), net, spec(P, R)));
      const auto want = oracle::filter(raw, P, R);
      expect(got == want, "P=" + show(P) + " R=" + show(R) + ": nodes " + show(got.nodes) + " edges " +
                              show(got.edges) + ", expected nodes " + show(want.nodes) + " edges " + show(want.edges));
      ++count;
    }
  }
  const auto g = as_raw(store::network_graph(fixture_snapshot(), net, spec({"sharp-p-complete"}, {"parsimonious"})));
  std::set<std::string> parsimonious;
  for (const auto& [slug, r] : raw.reductions) {
    if (r.tags.count("parsimonious")) parsimonious.insert(slug);
  }
  expect(g.edges == parsimonious, "parsimonious case edges " + show(g.edges));
  return std::to_string(count) + " filter specs, parsimonious case " + show(g.edges);
}

// 6. Empty filter is the identity; adding tags never adds edges.
std::string filter_monotonicity() {
  const auto& raw = raw_classic();
  const NetworkId net("classic");
  const auto full = as_raw(store::network_graph(fixture_snapshot(), net, FilterSpec{}));
  std::set<std::string> all_problems, all_reductions;
  for (const auto& [s, p] : raw.problems) all_problems.insert(s);
  for (const auto& [s, r] : raw.reductions) all_reductions.insert(s);
  expect(full.nodes == all_problems && full.edges == all_reductions, "empty filter is not the full graph");

  std::vector<std::pair<FilterSpec, std::set<std::string>>> graphs;
  std::vector<std::pair<std::set<std::string>, std::set<std::string>>> keys;
  for (const auto& P : oracle::power_set(raw.problem_tags)) {
    for (const auto& R : oracle::power_set(raw.reduction_tags)) {
      keys.emplace_back(P, R);
      graphs.emplace_back(spec(P, R), as_raw(store::network_graph(fixture_snapshot(), net, spec(P, R))).edges);
    }
  }
  int pairs = 0;
  for (std::size_t a = 0; a < keys.size(); ++a) {
    for (std::size_t b = 0; b < keys.size(); ++b) {
      if (!oracle::subset(keys[a].first, keys[b].first) || !oracle::subset(keys[a].second, keys[b].second)) continue;
      expect(oracle::subset(graphs[b].second, graphs[a].second),
             "edges grew from P=" + show(keys[a].first) + " R=" + show(keys[a].second) + " to P=" +
                 show(keys[b].first) + " R=" + show(keys[b].second));
      ++pairs;
    }
  }
  return "identity holds, " + std::to_string(pairs) + " subset pairs monotone";
}

// 7. Search ranks.
std::string search_contract() {
  const NetworkId net("classic");
  const auto& s = fixture_snapshot();
  auto hits = store::search(s, net, "Vertex Cover");
  expect(!hits.empty() && hits[0].slug == Slug("vertex-cover") && hits[0].rank == store::RankClass::kExactName,
         "'Vertex Cover' is not an exact-name hit for vertex-cover");

  const auto& alts = raw_classic().problems.at("vertex-cover").alternative_names;
  expect(!alts.empty(), "fixture vertex-cover has no alternative name");
  hits = store::search(s, net, alts[0]);
  expect(!hits.empty() && hits[0].slug == Slug("vertex-cover") && hits[0].rank == store::RankClass::kExactAlternative,
         "'" + alts[0] + "' is not an exact-alternative hit for vertex-cover");

  expect(store::search(s, net, "zzz-no-such").empty(), "no-match query returned hits");

  int queries = 0;
  for (const auto& [id, data] : s.networks()) {
    const auto corpus = oracle::read_corpus(testutil::fixture_root());
    const auto& raw = corpus.at(id.str());
    std::set<std::string> probes = {"sat", "cover", "set", "e", "3", "max", "clique", "cut", "x"};
    for (const auto& [slug, p] : raw.problems) {
      probes.insert(p.name);
      probes.insert(p.name.substr(0, 3));
      for (const auto& a : p.alternative_names) probes.insert(a);
    }
    for (const auto& q : probes) {
      std::vector<oracle::RawHit> got;
      for (const auto& h : store::search(s, id, q)) got.push_back({h.slug.str(), static_cast<int>(h.rank)});
      expect(got == oracle::search(raw, q), id.str() + ": ranking differs for '" + q + "'");
      ++queries;
    }
  }
  return "exact-name, exact-alternative ('" + alts[0] + "'), no-match, " + std::to_string(queries) +
         " queries match a linear scan";
}

api::ApiConfig server_config(const std::filesystem::path& root, int rate_limit) {
  api::ApiConfig cfg;
  cfg.host = "127.0.0.1";
  cfg.port = 0;
  cfg.corpus_root = root;
  cfg.rate_limit = rate_limit;
  return cfg;
}

json get_json(httplib::Client& client, const std::string& path, int status = 200) {
  auto res = client.Get(path);
  expect(static_cast<bool>(res), "no response for " + path);
  expect(res->status == status, path + ": status " + std::to_string(res->status) + " body " + res->body);
  expect(res->get_header_value("Content-Type") == api::kJsonContentType, path + ": wrong content type");
  return json::parse(res->body);
}

std::string error_of(httplib::Client& client, const std::string& path, int status) {
  return get_json(client, path, status)["error"]["code"];
}

// 8. HTTP contract: golden bodies, error statuses, rate limiting.
std::string api_contract() {
  api::Server server(server_config(testutil::fixture_root(), 100000));
  httplib::Client client("127.0.0.1", server.start(false));

  expect(get_json(client, "/api/health", 503)["status"] == "unavailable", "health before ingest");
  expect(error_of(client, "/api/networks", 503) == "snapshot-unavailable", "networks before ingest");
  expect(server.sync().tick() == store::SyncLoop::TickResult::kPublished, "initial ingest failed");

  const auto corpus = oracle::read_corpus(testutil::fixture_root());
  int golden_count = 0;
  auto golden_check = [&](const std::string& path, const json& want) {
    expect(get_json(client, path) == want, path + ": body differs from golden");
    ++golden_count;
  };
  golden_check("/api/networks", golden::networks(corpus));
  for (const auto& [id, n] : corpus) {
    const std::string base = "/api/networks/" + id;
    for (const auto& [slug, p] : n.problems) golden_check(base + "/problems/" + slug, golden::problem_detail(n, slug));
    for (const auto& [slug, r] : n.reductions) {
      golden_check(base + "/reductions/" + slug, golden::reduction_detail(n, slug));
    }
    for (const auto& P : oracle::power_set(n.problem_tags)) {
      for (const auto& R : oracle::power_set(n.reduction_tags)) {
        golden_check(base + "/graph?problem_tags=" + join(P) + "&reduction_tags=" + join(R), golden::graph(n, P, R));
      }
    }
    for (const auto& [slug, p] : n.problems) {
      golden_check(base + "/search?q=" + httplib::detail::encode_query_param(p.name), golden::search(n, p.name));
    }
    golden_check(base + "/search?q=sat", golden::search(n, "sat"));
  }
  expect(get_json(client, "/api/health")["status"] == "ok", "health after ingest");

  const std::vector<std::tuple<std::string, int, std::string>> errors = {
      {"/api/networks/classic/graph?problem_tags=pspace-complete", 400, "unknown-tag"},
      {"/api/networks/classic/graph?reduction_tags=fpt", 400, "unknown-tag"},
      {"/api/networks/classic/search?q=", 400, "empty-query"},
      {"/api/networks/classic/search", 400, "empty-query"},
      {"/api/networks/quantum/graph", 404, "unknown-network"},
      {"/api/networks/classic/problems/halting", 404, "unknown-problem"},
      {"/api/networks/classic/reductions/halting-to-sat", 404, "unknown-reduction"},
      {"/api/nothing-here", 404, "not-found"},
  };
  for (const auto& [path, status, code] : errors) {
    expect(error_of(client, path, status) == code, path + ": expected " + code);
  }
  server.stop();

  api::Server limited(server_config(testutil::fixture_root(), 5));
  httplib::Client limited_client("127.0.0.1", limited.start(false));
  expect(limited.sync().tick() == store::SyncLoop::TickResult::kPublished, "ingest failed");
  for (int i = 0; i < 5; ++i) get_json(limited_client, "/api/networks");
  expect(error_of(limited_client, "/api/networks", 429) == "rate-limited", "sixth request was not limited");
  limited.stop();

  return std::to_string(golden_count) + " golden bodies, " + std::to_string(errors.size()) +
         " error cases, 503 before ingest, 429 on request 6 with rate_limit=5";
}

// 9. Readers keep their snapshot across swaps; a bad tick changes nothing.
std::string snapshot_isolation() {
  FixtureCopy corpus;
  api::Server server(server_config(corpus.path(), 100000));
  httplib::Client client("127.0.0.1", server.start(false));
  expect(server.sync().tick() == store::SyncLoop::TickResult::kPublished, "initial ingest failed");

  const auto old_raw = oracle::read_corpus(corpus.path());
  const auto& old_classic = old_raw.at("classic");
  const auto reader = server.slot().current();
  const NetworkId net("classic");
  const auto graph = store::network_graph(*reader, net, FilterSpec{});

  bool swapped = false;
  for (std::size_t i = 0; i < graph.nodes.size(); ++i) {
    if (i == graph.nodes.size() / 2) {
      write_file(corpus / "classic/problems/clique.md", "# name\nRenamed Clique\n\n# abbreviation\nRCLQ\n");
      std::filesystem::remove(corpus / "classic/reductions/independent-set-to-clique.md");
      expect(server.sync().tick() == store::SyncLoop::TickResult::kPublished, "swap was not published");
      swapped = server.slot().current() != reader;
    }
    const auto& node = graph.nodes[i];
    const auto& problem = reader->network(net).problems.at(node.slug);
    expect(problem.name() == old_classic.problems.at(node.slug.str()).name, "reader saw new data for " + node.slug.str());
    expect(node.label == old_classic.problems.at(node.slug.str()).abbreviation, "label changed mid-iteration");
  }
  for (const auto& e : graph.edges) {
    expect(reader->network(net).reductions.count(e.slug) == 1, "reader lost reduction " + e.slug.str());
  }
  expect(swapped, "slot still holds the old snapshot after the swap");
  expect(get_json(client, "/api/networks/classic/problems/clique")["problem"]["name"] == "Renamed Clique",
         "new snapshot is not served");

  const auto before = get_json(client, "/api/health");
  const auto graph_before = get_json(client, "/api/networks/classic/graph");
  write_file(corpus / "classic/reductions/clique-to-ghost.md", "# from\nclique\n\n# to\nghost\n");
  expect(server.sync().tick() == store::SyncLoop::TickResult::kFailed, "corrupted corpus was accepted");
  const auto after = get_json(client, "/api/health");
  expect(after["snapshot_digest"] == before["snapshot_digest"], "served snapshot changed after a failed tick");
  expect(after["sync_failures"].get<int>() == before["sync_failures"].get<int>() + 1, "sync_failures not incremented");
  expect(get_json(client, "/api/networks/classic/graph") == graph_before, "graph changed after a failed tick");
  server.stop();
  return "reader kept old data through a swap; failed tick kept digest, sync_failures " +
         before["sync_failures"].dump() + " -> " + after["sync_failures"].dump();
}

}  // namespace

int main() {
  const std::vector<std::tuple<int, std::string, std::function<std::string()>>> criteria = {
      {1, "codec round-trip", codec_round_trip},
      {2, "format compliance", format_compliance},
      {3, "validator completeness", validator_completeness},
      {4, "validator/ingest agreement", validator_ingest_agreement},
      {5, "filter oracle equivalence", filter_oracle},
      {6, "filter identity and monotonicity", filter_monotonicity},
      {7, "search contract", search_contract},
      {8, "api contract", api_contract},
      {9, "snapshot isolation under sync", snapshot_isolation},
  };
  spdlog::set_level(spdlog::level::off);

  int failed = 0;
  for (const auto& [id, name, run] : criteria) {
    std::string detail;
    bool ok = false;
    try {
      detail = run();
      ok = true;
    } catch (const std::exception& e) {
      detail = e.what();
    }
    failed += !ok;
    std::cout << (ok ? "PASS" : "FAIL") << "  " << id << "  " << name << ": " << detail << std::endl;
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
