#include <benchmark/benchmark.h>

#include "gutinstinct/service/codec.hpp"
#include "gutinstinct/service/platform.hpp"
#include "gutinstinct/service/seed.hpp"

using namespace gutinstinct;
using namespace gutinstinct::service;

namespace {

std::unique_ptr<Platform> seeded() {
  auto p = std::make_unique<Platform>(State{}, std::make_shared<SystemClock>());
  auto seed = load_topics_dir(std::string(GUTINSTINCT_SEED_DIR) + "/topics");
  p->install_topics(std::move(seed.topics), std::move(seed.corpora));
  p->seed_mappings(load_mappings_file(std::string(GUTINSTINCT_SEED_DIR) + "/mappings.tsv"));
  p->define_experiments(experiment::default_experiments());
  return p;
}

}  // namespace

static void BM_CreateQuestion(benchmark::State& state) {
  auto p = seeded();
  const auto u = p->register_user("u", board::Role::participant).user_id;
  for (auto _ : state) {
    benchmark::DoNotOptimize(p->create_question(u, "Do you sleep badly after pasta?", "Details", {"pasta", "kombucha"}));
  }
}
BENCHMARK(BM_CreateQuestion);

static void BM_GatedAnswer(benchmark::State& state) {
  auto p = seeded();
  const auto author = p->register_user("a", board::Role::participant).user_id;
  const auto q = p->create_question(author, "Do you eat yogurt?", "How often?", {"yogurt"}).question_id;
  for (auto _ : state) {
    state.PauseTiming();
    const auto u = p->register_user("u", board::Role::participant).user_id;
    state.ResumeTiming();
    p->answer_level1(u, q, board::Level1Answer::yes);
    benchmark::DoNotOptimize(p->answer_level2(u, q, "daily"));
  }
}
BENCHMARK(BM_GatedAnswer);

static void BM_EncodeState(benchmark::State& state) {
  auto p = seeded();
  const auto author = p->register_user("a", board::Role::participant).user_id;
  for (int i = 0; i < 500; ++i) {
    const auto q = p->create_question(author, "Question?", "More?", {"food"}).question_id;
    p->cast_vote(author, q, board::VoteDirection::up);
  }
  const State s = p->snapshot();
  for (auto _ : state) benchmark::DoNotOptimize(canonical_dump(encode_state(s)));
}
BENCHMARK(BM_EncodeState);
