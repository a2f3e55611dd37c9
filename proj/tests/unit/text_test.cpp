#include <gtest/gtest.h>

#include <random>

#include "gutinstinct/router/text.hpp"

using gutinstinct::router::normalize;
using gutinstinct::router::tokenize;

TEST(Normalize, LowercasesAndTrims) {
  EXPECT_EQ(normalize("  Pasta "), "pasta");
  EXPECT_EQ(normalize("FOOD"), "food");
}

TEST(Normalize, FoldsSimplePlurals) {
  EXPECT_EQ(normalize("noodles"), "noodle");
  EXPECT_EQ(normalize("Fermented   Foods"), "fermented food");
  EXPECT_EQ(normalize("eat"), "eat");
  EXPECT_EQ(normalize("gas"), "gas");  // three code points: left alone
}

TEST(Normalize, KeepsDoubleS) {
  EXPECT_EQ(normalize("fitness"), "fitness");
  EXPECT_EQ(normalize("stress"), "stress");
  EXPECT_EQ(normalize("noodless"), "noodless");
}

TEST(Normalize, CollapsesUnicodeWhitespace) {
  EXPECT_EQ(normalize("jet\t  lag"), "jet lag");
}

TEST(Normalize, AppliesNfc) {
  // "e" + combining acute composes to U+00E9.
  EXPECT_EQ(normalize("Café"), "café");
  EXPECT_EQ(normalize("CAFÉ"), "café");
}

TEST(Normalize, BlankIsEmpty) {
  EXPECT_EQ(normalize(""), "");
  EXPECT_EQ(normalize(" \t\n"), "");
}

TEST(Normalize, IdempotentOnRandomInput) {
  std::mt19937_64 rng(7);
  const std::vector<std::string> pieces = {"s", "ss", "S", " ", "\t", "food", "Noodles", "é",
                                           "é", " ", "x", "class", "SSS", "bus"};
  std::uniform_int_distribution<std::size_t> pick(0, pieces.size() - 1);
  std::uniform_int_distribution<int> len(0, 12);
  for (int i = 0; i < 5000; ++i) {
    std::string raw;
    for (int n = len(rng); n > 0; --n) raw += pieces[pick(rng)];
    const std::string once = normalize(raw);
    ASSERT_EQ(normalize(once), once) << "input: '" << raw << "'";
  }
}

TEST(Tokenize, SplitsOnNonAlphanumericAndDropsShortTokens) {
  EXPECT_EQ(tokenize("Pasta, a RECIPE; for dinner-time!"),
            (std::vector<std::string>{"pasta", "recipe", "for", "dinner", "time"}));
  EXPECT_EQ(tokenize("B12 and omega3"), (std::vector<std::string>{"b12", "and", "omega3"}));
  EXPECT_TRUE(tokenize("? ! a").empty());
}

TEST(Tokenize, HandlesNonAsciiLetters) {
  EXPECT_EQ(tokenize("CafÉ naïve"), (std::vector<std::string>{"café", "naïve"}));
}
