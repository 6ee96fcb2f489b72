#include <benchmark/benchmark.h>

#include <fstream>
#include <random>
#include <unistd.h>

#include "atlas/codec.hpp"
#include "atlas/store.hpp"
#include "atlas/validator.hpp"

namespace fs = std::filesystem;
using namespace atlas;

namespace {

const std::vector<std::string> kProblemTags = {"np-complete", "sharp-p-complete", "apx-hard", "w1-complete"};
const std::vector<std::string> kReductionTags = {"parsimonious", "ssp", "gap-preserving", "fpt"};

void write(const fs::path& p, const std::string& text) {
  fs::create_directories(p.parent_path());
  std::ofstream(p, std::ios::binary) << text;
}

std::string lines(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& s : items) out += s + "\n";
  return out;
}

// One network with `problems` problems and about three reductions per problem.
class SyntheticCorpus {
 public:
  explicit SyntheticCorpus(int problems) {
    root_ = fs::temp_directory_path() / ("atlas-bench-" + std::to_string(::getpid()) + "-" + std::to_string(problems));
    fs::remove_all(root_);
    std::mt19937 rng(problems);
    const NetworkId net("synthetic");
    write(root_ / "synthetic/network.md", "# display-name\nSynthetic\n\n# problem-tags\n" + lines(kProblemTags) +
                                              "\n# reduction-tags\n" + lines(kReductionTags));
    for (int i = 0; i < problems; ++i) {
      ProblemTagSet tags;
      for (const auto& t : kProblemTags) {
        if (rng() % 3 == 0) tags.emplace(t);
      }
      const Problem p(ProblemFields{Slug("p" + std::to_string(i)), net, "Problem Number " + std::to_string(i),
                                    "P" + std::to_string(i), {"Alias " + std::to_string(i * 7)},
                                    "Given an instance of size $n$, decide whether it is feasible.", tags,
                                    "@book{gj79, title={Computers and Intractability}}"});
      write(root_ / ("synthetic/problems/p" + std::to_string(i) + ".md"), codec::serialize_problem(p));
    }
    for (int j = 0; j < problems * 3; ++j) {
      const int a = static_cast<int>(rng() % problems);
      const int b = static_cast<int>(rng() % problems);
      if (a == b) continue;
      ReductionTagSet tags;
      for (const auto& t : kReductionTags) {
        if (rng() % 3 == 0) tags.emplace(t);
      }
      const Reduction r(ReductionFields{Slug("r" + std::to_string(j)), net, Slug("p" + std::to_string(a)),
                                        Slug("p" + std::to_string(b)), "Local replacement.", tags, ""});
      write(root_ / ("synthetic/reductions/r" + std::to_string(j) + ".md"), codec::serialize_reduction(r));
    }
  }
  ~SyntheticCorpus() {
    std::error_code ec;
    fs::remove_all(root_, ec);
  }
  const fs::path& root() const { return root_; }

 private:
  fs::path root_;
};

const SyntheticCorpus& corpus(int problems) {
  static std::map<int, std::unique_ptr<SyntheticCorpus>> cache;
  auto& slot = cache[problems];
  if (!slot) slot = std::make_unique<SyntheticCorpus>(problems);
  return *slot;
}

const store::Snapshot& snapshot(int problems) {
  static std::map<int, std::unique_ptr<store::Snapshot>> cache;
  auto& slot = cache[problems];
  if (!slot) slot = std::make_unique<store::Snapshot>(store::ingest(corpus(problems).root()));
  return *slot;
}

void BM_ParseProblem(benchmark::State& state) {
  const std::string text = codec::serialize_problem(
      Problem(ProblemFields{Slug("vertex-cover"), NetworkId("classic"), "Vertex Cover", "VC", {"Node Cover"},
                            std::string(static_cast<std::size_t>(state.range(0)), 'x'), {ProblemTag("np-complete")},
                            "@book{gj79}"}));
  for (auto _ : state) {
    auto p = codec::parse_problem(codec::parse_document(text), Slug("vertex-cover"), NetworkId("classic"));
    benchmark::DoNotOptimize(p);
  }
  state.SetBytesProcessed(static_cast<int64_t>(state.iterations() * text.size()));
}
BENCHMARK(BM_ParseProblem)->Arg(64)->Arg(4096);

void BM_ValidateCorpus(benchmark::State& state) {
  const auto& c = corpus(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(lint::validate_corpus(c.root()));
}
BENCHMARK(BM_ValidateCorpus)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_Ingest(benchmark::State& state) {
  const auto& c = corpus(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(store::ingest(c.root()));
}
BENCHMARK(BM_Ingest)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_NetworkGraph(benchmark::State& state) {
  const auto& s = snapshot(static_cast<int>(state.range(0)));
  FilterSpec filter;
  if (state.range(1)) {
    filter.problem_tags.emplace("np-complete");
    filter.reduction_tags.emplace("parsimonious");
  }
  for (auto _ : state) benchmark::DoNotOptimize(store::network_graph(s, NetworkId("synthetic"), filter));
}
BENCHMARK(BM_NetworkGraph)->Args({1000, 0})->Args({1000, 1})->Unit(benchmark::kMicrosecond);

void BM_Search(benchmark::State& state) {
  const auto& s = snapshot(1000);
  const std::string query = state.range(0) ? "Problem Number 999" : "alias 1";
  for (auto _ : state) benchmark::DoNotOptimize(store::search(s, NetworkId("synthetic"), query));
}
BENCHMARK(BM_Search)->Arg(0)->Arg(1)->Unit(benchmark::kMicrosecond);

}  // namespace
BENCHMARK_MAIN();
