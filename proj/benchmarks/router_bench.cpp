#include <benchmark/benchmark.h>

#include <random>

#include "gutinstinct/router/tag_router.hpp"
#include "gutinstinct/router/text.hpp"
#include "gutinstinct/service/seed.hpp"

using namespace gutinstinct;
using namespace gutinstinct::router;

namespace {

const Corpora& seed_corpora() {
  static const Corpora c = service::load_topics_dir(std::string(GUTINSTINCT_SEED_DIR) + "/topics").corpora;
  return c;
}

// Synthetic corpus: `topics` topics of 20 documents, 80 words each.
Corpora synthetic(int topics) {
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<int> word(0, 4999);
  Corpora c;
  for (int t = 0; t < topics; ++t) {
    auto& docs = c["topic" + std::to_string(t)];
    for (int d = 0; d < 20; ++d) {
      std::string doc;
      for (int w = 0; w < 80; ++w) doc += "w" + std::to_string(word(rng)) + " ";
      docs.push_back(std::move(doc));
    }
  }
  return c;
}

}  // namespace

static void BM_Normalize(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(normalize("  Fermented   Foods "));
}
BENCHMARK(BM_Normalize);

static void BM_BuildSeedModel(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(build_model(seed_corpora(), from_millis(0)));
}
BENCHMARK(BM_BuildSeedModel);

static void BM_BuildSyntheticModel(benchmark::State& state) {
  const auto corpora = synthetic(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(build_model(corpora, from_millis(0)));
}
BENCHMARK(BM_BuildSyntheticModel)->Arg(3)->Arg(30);

static void BM_Classify(benchmark::State& state) {
  const auto model = build_model(seed_corpora(), from_millis(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(classify("pasta recipe dinner with friends", model, kDefaultThreshold));
  }
}
BENCHMARK(BM_Classify);

static void BM_ResolveManual(benchmark::State& state) {
  TagRouter r;
  r.seed_mappings(service::load_mappings_file(std::string(GUTINSTINCT_SEED_DIR) + "/mappings.tsv"),
                  from_millis(0));
  for (auto _ : state) benchmark::DoNotOptimize(r.resolve("Noodles", "", {}));
}
BENCHMARK(BM_ResolveManual);
