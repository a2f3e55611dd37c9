#include <gtest/gtest.h>

#include "gutinstinct/common/error.hpp"
#include "gutinstinct/router/tag_router.hpp"
#include "gutinstinct/service/seed.hpp"
#include "support/fixtures.hpp"

using namespace gutinstinct;
using namespace gutinstinct::router;

namespace {

const Timestamp kT0 = from_millis(1000);

TagRouter seeded_router() {
  TagRouter r;
  r.seed_mappings(service::load_mappings_file(fixtures::seed_dir() / "mappings.tsv"), kT0);
  r.set_corpora(service::load_topics_dir(fixtures::seed_dir() / "topics").corpora);
  return r;
}

board::UserAccount moderator() { return {UserId{1}, "mod", board::Role::moderator, kT0}; }

}  // namespace

TEST(TagRouter, ManualTableRoutesFoodTagsToDiet) {
  const auto r = seeded_router();
  for (const char* tag : {"food", "eat", "pasta", "noodles", "Noodles ", "PASTA"}) {
    const auto res = r.resolve(tag, "", {});
    ASSERT_TRUE(res.matched()) << tag;
    EXPECT_EQ(res.match->topic_id, "diet");
    EXPECT_EQ(res.match->method, RouteMethod::manual);
    EXPECT_EQ(res.match->score, 1.0);
  }
}

TEST(TagRouter, WithoutModelUnknownTagIsUnmappedAndFlagged) {
  const auto r = seeded_router();
  const auto res = r.resolve("kombucha", "", {});
  EXPECT_FALSE(res.matched());
  EXPECT_TRUE(res.model_missing);
}

TEST(TagRouter, ClassifierFallbackUsesTagAndContext) {
  const auto r = seeded_router();
  const auto model = build_model(r.corpora(), kT0);
  const ClassifierContext ctx{&model, kDefaultThreshold};
  const auto res = r.resolve("Sleep", "", ctx);
  ASSERT_TRUE(res.matched());
  EXPECT_EQ(res.match->topic_id, "sleep");
  EXPECT_EQ(res.match->method, RouteMethod::classifier);
  EXPECT_FALSE(res.model_missing);

  const auto ctx_res = r.resolve("recipe", "pasta dinner", ctx);
  ASSERT_TRUE(ctx_res.matched());
  EXPECT_EQ(ctx_res.match->topic_id, "diet");
  EXPECT_NEAR(ctx_res.match->score, 0.16203850977868772, 1e-12);
}

TEST(TagRouter, RouteQueuesUnmappedTagsWithCounts) {
  auto r = seeded_router();
  r.route("Kombucha", "", QuestionId{3}, from_millis(5), {});
  r.route("kombucha", "", QuestionId{9}, from_millis(6), {});
  r.route("food", "", QuestionId{10}, from_millis(7), {});
  ASSERT_EQ(r.unmapped_queue().size(), 1u);
  const auto& e = r.unmapped_queue().at("kombucha");
  EXPECT_EQ(e.occurrence_count, 2u);
  EXPECT_EQ(e.example_question_id, QuestionId{3});
  EXPECT_EQ(e.first_seen, from_millis(5));
}

TEST(TagRouter, ResolveHasNoSideEffects) {
  auto r = seeded_router();
  const auto before = r.data();
  r.resolve("kombucha", "", {});
  EXPECT_EQ(r.data(), before);
}

TEST(TagRouter, ApproveMappingClosesQueueEntry) {
  auto r = seeded_router();
  r.route("kombucha", "", QuestionId{1}, kT0, {});
  const auto& m = r.approve_mapping(moderator(), "Kombucha", "diet", true, from_millis(9));
  EXPECT_EQ(m.provenance, MappingProvenance::curator_approved);
  EXPECT_TRUE(r.unmapped_queue().empty());
  const auto res = r.resolve("kombucha", "", {});
  ASSERT_TRUE(res.matched());
  EXPECT_EQ(res.match->topic_id, "diet");
}

TEST(TagRouter, ApproveMappingRequiresModeratorAndKnownTopic) {
  auto r = seeded_router();
  board::UserAccount participant{UserId{2}, "p", board::Role::participant, kT0};
  try {
    r.approve_mapping(participant, "kombucha", "diet", true, kT0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotAuthorized);
  }
  try {
    r.approve_mapping(moderator(), "kombucha", "gardening", false, kT0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnknownTopic);
  }
}

TEST(TagRouter, SeedNeverOverwritesCuratorDecision) {
  auto r = seeded_router();
  r.approve_mapping(moderator(), "pasta", "exercise", true, kT0);
  r.seed_mappings({{"pasta", "diet"}}, kT0);
  EXPECT_EQ(r.mappings().at("pasta").topic_id, "exercise");
}

TEST(TagRouter, ResolveManualIsExactKey) {
  MappingTable t{{"jet lag", {"sleep", MappingProvenance::seeded, kT0}}};
  EXPECT_EQ(resolve_manual("jet lag", t), std::optional<TopicId>("sleep"));
  EXPECT_EQ(resolve_manual("jet", t), std::nullopt);
}
