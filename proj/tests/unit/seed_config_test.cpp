#include <gtest/gtest.h>

#include <fstream>

#include "gutinstinct/service/config.hpp"
#include "gutinstinct/service/runtime.hpp"
#include "gutinstinct/service/seed.hpp"
#include "support/expect_error.hpp"
#include "support/fixtures.hpp"

using namespace gutinstinct;
using namespace gutinstinct::service;
using nlohmann::json;

TEST(Seed, TopicsDirectoryLoads) {
  const auto seed = load_topics_dir(fixtures::seed_dir() / "topics");
  ASSERT_EQ(seed.topics.size(), 3u);
  EXPECT_EQ(seed.topics[0].topic_id, "diet");
  EXPECT_EQ(seed.topics[0].sections.size(), 5u);
  EXPECT_EQ(seed.topics[0].quiz.size(), 4u);
  EXPECT_EQ(seed.corpora.at("diet").size(), 4u);
  EXPECT_EQ(seed.corpora.at("sleep").size(), 3u);
  EXPECT_EQ(seed.corpora.at("exercise").size(), 3u);
}

TEST(Seed, BrokenTopicFileIsRejected) {
  fixtures::TempDir dir;
  std::ofstream(dir.path() / "bad.json") << R"({"topic_id": "bad", "title": "Bad", "sections": [],
    "quiz": [{"item_id": "q", "prompt": "p", "options": ["a"], "correct_index": 4, "expert_insight": "i"}]})";
  EXPECT_ERROR_CODE(load_topics_dir(dir.path()), ErrorCode::SeedParseError);
}

TEST(Seed, MappingsParse) {
  const auto m = parse_mappings("# comment\n\nfood\tdiet\nJet  Lag\tsleep\r\nfoods\tdiet\n");
  ASSERT_EQ(m.size(), 2u);  // "foods" folds onto "food" with the same topic
  EXPECT_EQ(m[1].first, "Jet  Lag");
  EXPECT_EQ(m[1].second, "sleep");
}

TEST(Seed, MappingConflictsAndMalformedLinesAreRejected) {
  EXPECT_ERROR_CODE(parse_mappings("food\tdiet\nFoods\tsleep\n"), ErrorCode::SeedParseError);
  EXPECT_ERROR_CODE(parse_mappings("food diet\n"), ErrorCode::SeedParseError);
  EXPECT_ERROR_CODE(parse_mappings("food\t\n"), ErrorCode::SeedParseError);
}

TEST(Seed, SeedMappingFileCoversFoodTags) {
  const auto m = load_mappings_file(fixtures::seed_dir() / "mappings.tsv");
  std::set<std::string> diet;
  for (const auto& [tag, topic] : m) {
    if (topic == "diet") diet.insert(tag);
  }
  for (const char* t : {"food", "eat", "pasta", "noodles"}) EXPECT_TRUE(diet.count(t)) << t;
}

TEST(Seed, ExperimentsParse) {
  const auto defs = load_experiments_file(fixtures::seed_dir() / "experiments.json");
  EXPECT_EQ(defs, experiment::default_experiments());
  EXPECT_ERROR_CODE(parse_experiments(json{{"experiment_id", "x"}, {"conditions", {"a"}},
                                           {"salt", "s"}, {"strategy", "hash"}}),
                    ErrorCode::SeedParseError);
}

TEST(Config, DefaultsAreValid) {
  const ApiConfig c;
  EXPECT_NO_THROW(validate(c));
  EXPECT_EQ(c.session_ttl, std::chrono::hours(24));
  EXPECT_EQ(c.session_gap, std::chrono::minutes(30));
  EXPECT_EQ(c.router_threshold, 0.15);
}

TEST(Config, ParsesAndResolvesPaths) {
  const auto c = config_from_json(json::parse(R"({
      "listen_address": "0.0.0.0:9000", "data_path": "var", "session_ttl_seconds": 60,
      "router_threshold": 0.3, "session_gap_seconds": 600, "topics_dir": "seed/topics",
      "level2_public": false})"),
                                  "/srv/gi");
  EXPECT_EQ(c.listen_host, "0.0.0.0");
  EXPECT_EQ(c.listen_port, 9000);
  EXPECT_EQ(c.data_path, std::filesystem::path("/srv/gi/var"));
  EXPECT_EQ(c.session_ttl, std::chrono::seconds(60));
  EXPECT_EQ(c.session_gap, std::chrono::seconds(600));
  EXPECT_EQ(*c.topics_dir, std::filesystem::path("/srv/gi/seed/topics"));
  EXPECT_FALSE(c.level2_public);
}

TEST(Config, RejectsBadValues) {
  EXPECT_ERROR_CODE(config_from_json(json{{"router_threshold", 1.0}}), ErrorCode::ConfigInvalid);
  EXPECT_ERROR_CODE(config_from_json(json{{"session_gap_seconds", 0}}), ErrorCode::ConfigInvalid);
  EXPECT_ERROR_CODE(config_from_json(json{{"listen_address", "nohost"}}), ErrorCode::ConfigInvalid);
  EXPECT_ERROR_CODE(config_from_json(json{{"router_threshold", "high"}}), ErrorCode::ConfigInvalid);
  EXPECT_ERROR_CODE(load_config("/nonexistent/config.json"), ErrorCode::ConfigInvalid);
}

TEST(Config, ExampleFileLoads) {
  const auto c = load_config(fixtures::seed_dir().parent_path().parent_path() / "config.example.json");
  EXPECT_TRUE(c.topics_dir);
  EXPECT_TRUE(std::filesystem::exists(*c.topics_dir));
}

TEST(Runtime, AppliesSeedsAndSurvivesRestart) {
  fixtures::TempDir dir;
  ApiConfig c;
  c.data_path = dir.path() / "var";
  c.topics_dir = fixtures::seed_dir() / "topics";
  c.mappings_file = fixtures::seed_dir() / "mappings.tsv";
  c.password = PasswordParams::minimum();
  UserId u;
  {
    auto rt = open_runtime(c, std::make_shared<ManualClock>());
    EXPECT_EQ(rt->platform->topics().size(), 3u);
    u = rt->platform->register_user("u", board::Role::participant).user_id;
    rt->platform->create_question(u, "Do you eat pasta?", "How much?", {"pasta"});
    // No experiments file: the defaults are defined.
    EXPECT_NO_THROW(rt->platform->assign(u, "h23_worklearn"));
  }
  auto rt = open_runtime(c, std::make_shared<ManualClock>(), false);
  const auto qs = rt->platform->list_questions({}, board::SortOrder::newest);
  ASSERT_EQ(qs.size(), 1u);
  EXPECT_EQ(qs[0].topic_id, std::optional<TopicId>("diet"));
  EXPECT_TRUE(rt->platform->model());
  EXPECT_EQ(rt->platform->assign(u, "h23_worklearn").experiment_id, "h23_worklearn");
}
