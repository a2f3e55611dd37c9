#include <gtest/gtest.h>

#include <set>

#include "gutinstinct/service/auth.hpp"

using namespace gutinstinct;
using namespace gutinstinct::service;
using namespace std::chrono_literals;

TEST(Password, HashVerifies) {
  const auto h = hash_password("correct horse", PasswordParams::minimum());
  EXPECT_EQ(h.rfind("$argon2id$", 0), 0u);
  EXPECT_TRUE(verify_password(h, "correct horse"));
  EXPECT_FALSE(verify_password(h, "wrong horse"));
  EXPECT_FALSE(verify_password("garbage", "correct horse"));
  EXPECT_NE(hash_password("correct horse", PasswordParams::minimum()), h);
}

TEST(Token, RandomAndUrlSafe) {
  std::set<std::string> seen;
  for (int i = 0; i < 200; ++i) {
    const auto t = random_token();
    EXPECT_EQ(t.size(), 22u);
    EXPECT_EQ(t.find_first_not_of("ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789-_"),
              std::string::npos);
    seen.insert(t);
  }
  EXPECT_EQ(seen.size(), 200u);
}

TEST(Sessions, ExpireAndRevoke) {
  auto clock = std::make_shared<ManualClock>(from_millis(0));
  SessionRegistry reg(clock, 10s);
  const auto a = reg.issue(UserId{1});
  const auto b = reg.issue(UserId{2});
  EXPECT_EQ(reg.validate(a.token), std::optional<UserId>(UserId{1}));
  reg.revoke(b.token);
  EXPECT_FALSE(reg.validate(b.token));
  clock->advance(11s);
  EXPECT_FALSE(reg.validate(a.token));
  EXPECT_FALSE(reg.validate("nonsense"));
}
