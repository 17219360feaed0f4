// Copyright 2026 The attrdial Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// =============================================================================

#include "attrdial/text.h"

#include <gtest/gtest.h>

namespace attrdial {
namespace {

std::vector<std::string> Texts(std::string_view s) {
  std::vector<std::string> out;
  for (const Token& t : Tokenize(s)) out.push_back(t.text);
  return out;
}

TEST(TokenizeTest, SplitsOnPunctuationAndFolds) {
  EXPECT_EQ(Texts("Mission: Impossible!"),
            (std::vector<std::string>{"mission", "impossible"}));
  EXPECT_EQ(Texts("  Sci-Fi,  please "),
            (std::vector<std::string>{"sci", "fi", "please"}));
  EXPECT_TRUE(Tokenize("").empty());
  EXPECT_TRUE(Tokenize("?! ...").empty());
}

TEST(TokenizeTest, InnerApostropheJoins) {
  EXPECT_EQ(Texts("Don't I'll"), (std::vector<std::string>{"dont", "ill"}));
  // U+2019 right single quotation mark behaves like '.
  EXPECT_EQ(Texts("Don\xE2\x80\x99t"), (std::vector<std::string>{"dont"}));
  // Leading and trailing apostrophes are separators.
  EXPECT_EQ(Texts("'quoted'"), (std::vector<std::string>{"quoted"}));
}

TEST(TokenizeTest, OffsetsPointIntoSource) {
  const std::string s = "Hi, Keri Russell.";
  const std::vector<Token> tokens = Tokenize(s);
  ASSERT_EQ(tokens.size(), 3u);
  EXPECT_EQ(s.substr(tokens[1].begin, tokens[1].end - tokens[1].begin), "Keri");
  EXPECT_EQ(s.substr(tokens[2].begin, tokens[2].end - tokens[2].begin),
            "Russell");
}

TEST(TokenizeTest, PlaceholdersAreBarriers) {
  const std::vector<Token> tokens = Tokenize("I like [GENRE_12] and [NEW_MOVIE].");
  ASSERT_EQ(tokens.size(), 5u);
  EXPECT_TRUE(tokens[2].barrier);
  EXPECT_EQ(tokens[2].text, "[GENRE_12]");
  EXPECT_TRUE(tokens[4].barrier);
  EXPECT_EQ(tokens[4].text, "[NEW_MOVIE]");
  EXPECT_FALSE(tokens[0].barrier);
}

TEST(TokenizeTest, MalformedPlaceholdersAreWords) {
  EXPECT_EQ(Texts("[GENRE_] [MOVIE_x] [NEW_FILM]"),
            (std::vector<std::string>{"genre", "movie", "x", "new", "film"}));
}

TEST(TokenizeTest, NonAsciiLettersStayInWords) {
  EXPECT_EQ(Texts("Alfonso Cuar\xC3\x93n"),
            (std::vector<std::string>{"alfonso", "cuar\xC3\xB3n"}));
  // Latin-1 punctuation separates.
  EXPECT_EQ(Texts("a\xC2\xBB" "b"), (std::vector<std::string>{"a", "b"}));
}

TEST(CaseFoldTest, AsciiAndLatin1) {
  EXPECT_EQ(CaseFold("ABC xyz"), "abc xyz");
  EXPECT_EQ(CaseFold("\xC3\x89T\xC3\x89"), "\xC3\xA9t\xC3\xA9");  // ÉTÉ
  EXPECT_EQ(CaseFold("\xC3\x97"), "\xC3\x97");  // multiplication sign stays
}

TEST(CanonicalizeTest, StripsLeadingArticleOnlyWhenAsked) {
  EXPECT_EQ(Canonicalize("The Dark Knight"), "the dark knight");
  EXPECT_EQ(Canonicalize("The Dark Knight", true), "dark knight");
  EXPECT_EQ(Canonicalize("An Education", true), "education");
  // A lone article is kept.
  EXPECT_EQ(Canonicalize("The", true), "the");
  EXPECT_EQ(Canonicalize("Like a Boss", true), "like a boss");
}

TEST(CountWordsTest, WhitespaceSeparated) {
  EXPECT_EQ(CountWords(""), 0u);
  EXPECT_EQ(CountWords("  one   two\tthree\n"), 3u);
  EXPECT_EQ(CountWords("don't-stop"), 1u);
}

TEST(SplitClausesTest, CoversTextWithoutOverlap) {
  const std::string s = "I like horror, but not tonight. Any ideas?";
  const std::vector<Clause> clauses = SplitClauses(s);
  ASSERT_GE(clauses.size(), 3u);
  for (size_t i = 1; i < clauses.size(); ++i) {
    EXPECT_LE(clauses[i - 1].end, clauses[i].begin);
  }
  auto clause_of = [&](size_t pos) {
    for (const Clause& c : clauses) {
      if (c.begin <= pos && pos < c.end) return s.substr(c.begin, c.end - c.begin);
    }
    return std::string();
  };
  EXPECT_EQ(clause_of(s.find("horror")).find("tonight"), std::string::npos);
  EXPECT_NE(clause_of(s.find("tonight")).find("not"), std::string::npos);
}

}  // namespace
}  // namespace attrdial
