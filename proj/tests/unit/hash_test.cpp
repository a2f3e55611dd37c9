#include <gtest/gtest.h>

#include "gutinstinct/common/hash.hpp"
#include "gutinstinct/experiment/experiment.hpp"

using namespace gutinstinct;

TEST(Fnv1a64, PublishedVectors) {
  EXPECT_EQ(fnv1a64(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
  EXPECT_EQ(fnv1a64("foobar"), 0x85944171f73967e8ULL);
}

TEST(Fnv1a64, ChainingEqualsConcatenation) {
  EXPECT_EQ(fnv1a64("bar", fnv1a64("foo")), fnv1a64("foobar"));
}

TEST(Hex64, PadsToSixteenDigits) {
  EXPECT_EQ(to_hex64(0), "0000000000000000");
  EXPECT_EQ(to_hex64(0xaf63dc4c8601ec8cULL), "af63dc4c8601ec8c");
}

TEST(BucketHash, HashesSaltUserAndExperimentWithUnitSeparators) {
  const std::string bytes = std::string("salt") + '\x1f' + "42" + '\x1f' + "exp";
  EXPECT_EQ(experiment::bucket_hash("salt", UserId{42}, "exp"), fnv1a64(bytes));
}

TEST(Pseudonym, IsHexOfSaltedUserId) {
  const std::string bytes = std::string("pepper") + '\x1f' + "7";
  EXPECT_EQ(experiment::pseudonymize("pepper", UserId{7}), to_hex64(fnv1a64(bytes)));
  EXPECT_NE(experiment::pseudonymize("pepper", UserId{7}),
            experiment::pseudonymize("other", UserId{7}));
}
