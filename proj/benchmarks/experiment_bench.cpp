#include <benchmark/benchmark.h>

#include <random>

#include "gutinstinct/experiment/experiment.hpp"

using namespace gutinstinct;
using namespace gutinstinct::experiment;

static void BM_Sessionize(benchmark::State& state) {
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<std::int64_t> when(0, 30LL * 24 * 3600 * 1000);
  std::vector<Timestamp> times(static_cast<std::size_t>(state.range(0)));
  for (auto& t : times) t = from_millis(when(rng));
  for (auto _ : state) benchmark::DoNotOptimize(sessionize(times, kDefaultSessionGap));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Sessionize)->Arg(100)->Arg(10000);

static void BM_BucketHash(benchmark::State& state) {
  std::uint64_t u = 0;
  for (auto _ : state) benchmark::DoNotOptimize(bucket_hash("h23-worklearn-v1", UserId{++u}, "h23_worklearn"));
}
BENCHMARK(BM_BucketHash);

static void BM_BalancedAssign(benchmark::State& state) {
  for (auto _ : state) {
    Experiments e;
    e.define(default_experiments());
    for (std::uint64_t u = 1; u <= 1000; ++u) e.assign(UserId{u}, "h1_material", from_millis(0));
    benchmark::DoNotOptimize(e);
  }
}
BENCHMARK(BM_BalancedAssign);
