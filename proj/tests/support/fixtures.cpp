#include "support/fixtures.hpp"

#include <cstdlib>
#include <map>

#include "gutinstinct/common/error.hpp"
#include "gutinstinct/service/seed.hpp"

namespace fixtures {

using namespace gutinstinct;
namespace fs = std::filesystem;

fs::path seed_dir() { return fs::path(GUTINSTINCT_SEED_DIR); }

TempDir::TempDir() {
  std::string tmpl = (fs::temp_directory_path() / "gutinstinct-test-XXXXXX").string();
  if (::mkdtemp(tmpl.data()) == nullptr) {
    throw std::runtime_error("mkdtemp failed");
  }
  path_ = tmpl;
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

void apply_seed(service::Platform& platform) {
  auto topics = service::load_topics_dir(seed_dir() / "topics");
  platform.install_topics(std::move(topics.topics), std::move(topics.corpora));
  platform.seed_mappings(service::load_mappings_file(seed_dir() / "mappings.tsv"));
  platform.define_experiments(service::load_experiments_file(seed_dir() / "experiments.json"));
}

std::unique_ptr<service::Platform> seeded_platform(std::shared_ptr<const Clock> clock,
                                                   std::shared_ptr<service::SnapshotStore> store) {
  if (!clock) clock = std::make_shared<ManualClock>(from_millis(1'700'000'000'000), Duration{1000});
  auto platform = std::make_unique<service::Platform>(service::State{}, std::move(clock),
                                                      service::PlatformOptions{}, std::move(store));
  apply_seed(*platform);
  return platform;
}

namespace {

const std::vector<std::string>& word_pool() {
  static const std::vector<std::string> words = {
      "gut",     "microbe", "fiber",  "yogurt",  "kimchi", "sleep",   "nap",     "run",
      "lift",    "sugar",   "bread",  "pasta",   "rice",   "bean",    "coffee",  "tea",
      "night",   "shift",   "stress", "mood",    "immune", "diverse", "plant",   "meat",
      "dairy",   "walk",    "swim",   "heart",   "bowel",  "sample",  "stool",   "diet",
      "covid19", "b12",     "Omega3", "PROBIOTIC", "Lactobacillus", "x",  "a",   "ok"};
  return words;
}

std::string random_text(std::mt19937_64& rng, std::size_t min_words, std::size_t max_words,
                        std::size_t pool_size) {
  const auto& pool = word_pool();
  std::uniform_int_distribution<std::size_t> len(min_words, max_words);
  std::uniform_int_distribution<std::size_t> pick(0, std::min(pool_size, pool.size()) - 1);
  static const char* separators[] = {" ", "  ", ", ", ". ", "-", "\n", "; "};
  std::uniform_int_distribution<std::size_t> sep(0, std::size(separators) - 1);
  std::string out;
  const std::size_t n = len(rng);
  for (std::size_t i = 0; i < n; ++i) {
    if (i) out += separators[sep(rng)];
    out += pool[pick(rng)];
  }
  return out;
}

}  // namespace

ClassifierFixture random_classifier_fixture(std::mt19937_64& rng) {
  ClassifierFixture f;
  std::uniform_int_distribution<int> topic_count(2, 4);
  std::uniform_int_distribution<int> doc_count(1, 5);
  std::uniform_int_distribution<int> percent(0, 99);
  const int topics = topic_count(rng);
  // Corpora use the first 30 words; queries may draw the rest, which are
  // unknown to the model.
  for (int t = 0; t < topics; ++t) {
    auto& docs = f.corpora["topic" + std::to_string(t)];
    const int n = doc_count(rng);
    for (int d = 0; d < n; ++d) {
      docs.push_back(percent(rng) < 5 ? std::string("? ! a") : random_text(rng, 3, 20, 30));
    }
  }
  f.query = random_text(rng, 1, 8, word_pool().size());
  return f;
}

OpStats run_random_ops(service::Platform& platform, std::mt19937_64& rng, std::size_t count) {
  OpStats stats;
  std::vector<UserId> users;
  std::vector<QuestionId> questions;
  std::map<std::pair<std::uint64_t, std::uint64_t>, bool> yes;  // (question, user) -> "yes"
  std::map<std::uint64_t, bool> hidden;

  const auto topics = platform.topics();
  static const std::vector<std::string> tag_pool = {"food", "Pasta", "noodles", "sleep",
                                                    "nap",  "stress", "kimchi", "running",
                                                    "Fermented  Foods", "coffee"};

  users.push_back(platform.register_user("moderator", board::Role::moderator).user_id);
  for (int i = 0; i < 4; ++i) {
    users.push_back(platform.register_user("user" + std::to_string(i), board::Role::participant)
                        .user_id);
  }

  std::uniform_int_distribution<int> op(0, 99);
  auto pick = [&](const auto& v) {
    return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng)];
  };
  auto maybe_unknown_question = [&]() {
    if (questions.empty() || op(rng) < 3) return QuestionId{999'999};
    return pick(questions);
  };

  for (std::size_t i = 0; i < count; ++i) {
    ++stats.ops;
    const int r = op(rng);
    try {
      if (r < 2) {
        users.push_back(platform.register_user("u" + std::to_string(i), board::Role::participant)
                            .user_id);
      } else if (r < 10) {
        std::vector<std::string> tags;
        const int nt = std::uniform_int_distribution<int>(0, 3)(rng);
        for (int t = 0; t < nt; ++t) tags.push_back(pick(tag_pool));
        const auto q = platform.create_question(pick(users), "Do you eat fermented food?",
                                                op(rng) < 5 ? "" : "Which kinds, how often?", tags);
        questions.push_back(q.question_id);
      } else if (r < 12) {
        if (!questions.empty()) {
          platform.edit_question(pick(users), pick(questions), std::nullopt,
                                 std::string("More detail please"),
                                 std::vector<std::string>{pick(tag_pool)});
        }
      } else if (r < 13) {
        if (!questions.empty()) {
          const auto q = pick(questions);
          const bool h = op(rng) < 70;
          platform.hide_question(users.front(), q, h);
          hidden[q.value] = h;
        }
      } else if (r < 40) {
        const auto u = pick(users);
        const auto q = maybe_unknown_question();
        const auto answer = op(rng) < 60 ? board::Level1Answer::yes : board::Level1Answer::no;
        platform.answer_level1(u, q, answer);
        yes[{q.value, u.value}] = answer == board::Level1Answer::yes;
      } else if (r < 70) {
        const auto u = pick(users);
        const auto q = maybe_unknown_question();
        const bool known = std::find(questions.begin(), questions.end(), q) != questions.end();
        const bool violating = known && !hidden[q.value] && !yes[{q.value, u.value}];
        ++stats.level2_attempts;
        if (violating) ++stats.violating_attempts;
        try {
          platform.answer_level2(u, q, op(rng) < 5 ? " " : "Twice a week, mostly yogurt.");
          ++stats.level2_accepted;
        } catch (const Error& e) {
          if (violating && e.code() == ErrorCode::NotQualified) {
            ++stats.violating_rejected_not_qualified;
          }
          throw;
        }
      } else if (r < 85) {
        const auto u = pick(users);
        const auto q = maybe_unknown_question();
        ++stats.votes;
        platform.cast_vote(u, q, op(rng) < 65 ? board::VoteDirection::up : board::VoteDirection::down);
      } else if (r < 90) {
        const auto q = maybe_unknown_question();
        platform.add_comment(pick(users), q, "I noticed the same thing", std::nullopt);
      } else if (r < 95) {
        if (!topics.empty()) {
          const auto& t = pick(topics);
          if (op(rng) < 50 && !t.sections.empty()) {
            platform.record_view(pick(users), t.topic_id, pick(t.sections).section_id);
          } else if (!t.quiz.empty()) {
            const auto& item = pick(t.quiz);
            platform.answer_quiz(pick(users), t.topic_id, item.item_id,
                                 std::uniform_int_distribution<std::size_t>(0, item.options.size())(rng));
          }
        }
      } else {
        const auto u = pick(users);
        if (op(rng) < 50) {
          platform.assign(u, op(rng) < 50 ? "h1_material" : "h23_worklearn");
        } else {
          platform.log_event(u, experiment::EventKind::video_play, std::string("intro"));
        }
      }
    } catch (const Error&) {
      // Domain rejections are part of the workload.
    }
  }
  return stats;
}

std::size_t gate_violations(const service::State& state) {
  std::size_t bad = 0;
  const auto& data = state.board.data();
  for (const auto& r : data.level2) {
    const auto it = data.level1.find({r.question_id, r.user_id});
    if (it == data.level1.end() || !it->second.qualifies() || it->second.at > r.at) ++bad;
  }
  return bad;
}

std::size_t score_mismatches(const service::State& state) {
  std::map<QuestionId, std::int64_t> tally;
  for (const auto& [key, vote] : state.board.data().votes) {
    tally[key.first] += vote.direction == board::VoteDirection::up ? 1 : -1;
  }
  std::size_t bad = 0;
  for (const auto& [id, q] : state.board.data().questions) {
    const auto it = tally.find(id);
    if (q.score != (it == tally.end() ? 0 : it->second)) ++bad;
  }
  return bad;
}

}  // namespace fixtures
