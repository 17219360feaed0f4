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

#include "attrdial/delex.h"

#include <random>

#include <gtest/gtest.h>

#include "attrdial/errors.h"
#include "attrdial/extract.h"
#include "attrdial/predictor.h"
#include "attrdial/recommender.h"
#include "fixtures.h"

namespace attrdial {
namespace {

using ::attrdial::testing::DemoKb;
using ::attrdial::testing::DemoPatterns;
using ::attrdial::testing::ExDKb;

TEST(PlaceholderTest, RenderAndParse) {
  EXPECT_EQ(Placeholder::Indexed(AttributeKind::kMovieTitle, 0).Render(),
            "[MOVIE_0]");
  EXPECT_EQ(Placeholder::Indexed(AttributeKind::kGenre, 12).Render(),
            "[GENRE_12]");
  EXPECT_EQ(Placeholder::New(AttributeKind::kPerson).Render(), "[NEW_PERSON]");
  for (const char* s : {"[MOVIE_0]", "[PERSON_3]", "[NEW_GENRE]", "[NEW_MOVIE]"}) {
    const auto p = Placeholder::Parse(s);
    ASSERT_TRUE(p.has_value()) << s;
    EXPECT_EQ(p->Render(), s);
  }
  for (const char* s : {"[MOVIE_]", "[MOVIE_-1]", "MOVIE_0", "[FILM_0]",
                        "[NEW_FILM]", "[MOVIE_01]", "[MOVIE_0] ", ""}) {
    EXPECT_FALSE(Placeholder::Parse(s).has_value()) << s;
  }
  EXPECT_EQ(Placeholder::New(AttributeKind::kGenre).index(), -1);
}

TEST(PlaceholderTest, OrderIsKindThenIndexedBeforeNew) {
  std::vector<Placeholder> v = {
      Placeholder::New(AttributeKind::kMovieTitle),
      Placeholder::Indexed(AttributeKind::kGenre, 0),
      Placeholder::Indexed(AttributeKind::kMovieTitle, 1),
      Placeholder::Indexed(AttributeKind::kMovieTitle, 0)};
  std::sort(v.begin(), v.end());
  std::vector<std::string> r;
  for (const Placeholder& p : v) r.push_back(p.Render());
  EXPECT_EQ(r, (std::vector<std::string>{"[MOVIE_0]", "[MOVIE_1]",
                                         "[NEW_MOVIE]", "[GENRE_0]"}));
}

TEST(PlaceholderMapTest, IndicesAreContiguousPerKindAndStable) {
  PlaceholderMap map;
  const Attribute g1(AttributeKind::kGenre, "horror");
  const Attribute g2(AttributeKind::kGenre, "action");
  const Attribute m1(AttributeKind::kMovieTitle, "Antlers");
  EXPECT_EQ(map.Assign(g1).Render(), "[GENRE_0]");
  EXPECT_EQ(map.Assign(m1).Render(), "[MOVIE_0]");
  EXPECT_EQ(map.Assign(g2).Render(), "[GENRE_1]");
  EXPECT_EQ(map.Assign(g1).Render(), "[GENRE_0]");
  EXPECT_EQ(map.size(), 3u);
  EXPECT_EQ(map.CountOf(AttributeKind::kGenre), 2u);
  EXPECT_EQ(*map.Find(Placeholder::Indexed(AttributeKind::kGenre, 1)), g2);
  EXPECT_EQ(map.Find(Placeholder::Indexed(AttributeKind::kGenre, 2)), nullptr);
  EXPECT_EQ(map.Find(Placeholder::New(AttributeKind::kGenre)), nullptr);
  EXPECT_FALSE(map.Find(Attribute(AttributeKind::kGenre, "drama")).has_value());
  const auto entries = map.Entries();
  ASSERT_EQ(entries.size(), 3u);
  EXPECT_EQ(entries[0].first.Render(), "[MOVIE_0]");
}

class DelexTest : public ::testing::Test {
 protected:
  DelexTest() : extractor_(DemoKb(), DemoPatterns()) {}

  Turn MakeTurn(Side side, const std::string& text) {
    Turn t;
    t.speaker = side;
    t.text = text;
    t.mentions = extractor_.Extract(text, side);
    return t;
  }

  MentionExtractor extractor_;
};

TEST_F(DelexTest, DelexicalizeTextKeepsSurroundingBytes) {
  PlaceholderMap map;
  const Turn t = MakeTurn(Side::kUser, "I like horror, and Keri Russell!");
  EXPECT_EQ(DelexicalizeText(t.text, t.mentions, map),
            "I like [GENRE_0], and [PERSON_0]!");
  std::vector<AttributeMention> bad = t.mentions;
  bad.back().end = 1000;
  EXPECT_THROW(DelexicalizeText(t.text, bad, map), InternalError);
}

TEST_F(DelexTest, DelexicalizeDialogAndTrackings) {
  std::vector<Turn> turns = {
      MakeTurn(Side::kUser, "I like horror movie"),
      MakeTurn(Side::kSystem, "I recommend the movie Antlers"),
  };
  TurnTrackings tr;
  tr.user = AttributeTracking(Side::kUser, 2);
  tr.system = AttributeTracking(Side::kSystem, 2);
  tr.user.Set(*extractor_.Resolve("horror"), Label::kPos);
  tr.system.Set(*extractor_.Resolve("Antlers"), Label::kNeg);
  PlaceholderMap map;
  const DelexResult r = Delexicalize(turns, tr, map);
  EXPECT_EQ(r.turn_texts, (std::vector<std::string>{
                              "I like [GENRE_0] movie",
                              "I recommend the movie [MOVIE_0]"}));
  EXPECT_EQ(r.context,
            "user: I like [GENRE_0] movie\nsystem: I recommend the movie "
            "[MOVIE_0]");
  EXPECT_EQ(r.user.entries().at(Placeholder::Indexed(AttributeKind::kGenre, 0)),
            Label::kPos);
  EXPECT_EQ(r.system.entries().at(
                Placeholder::Indexed(AttributeKind::kMovieTitle, 0)),
            Label::kNeg);
  EXPECT_EQ(r.user.turn(), 2);
}

TEST_F(DelexTest, RelexicalizeFillsNewFromRecommender) {
  PlaceholderMap map;
  const Attribute crime = *extractor_.Resolve("crime");
  map.Assign(crime);
  TurnTrackings current;
  current.user.Set(crime, Label::kPos);

  PredictedTracking predicted(2);
  predicted.Set(Placeholder::Indexed(AttributeKind::kGenre, 0), Label::kPos);
  predicted.Set(Placeholder::New(AttributeKind::kMovieTitle), Label::kPos);
  const KbRecommender rec(DemoKb());
  AttributeTracking out = Relexicalize(predicted, map, rec, current, 2);
  EXPECT_EQ(out.side(), Side::kSystem);
  EXPECT_EQ(out.turn(), 2);
  EXPECT_EQ(out.LabelOf(crime), Label::kPos);
  const Attribute dk = *extractor_.Resolve("The Dark Knight");
  EXPECT_EQ(out.LabelOf(dk), Label::kPos);

  // Titles already in the map are never picked again.
  map.Assign(dk);
  out = Relexicalize(predicted, map, rec, current, 2);
  EXPECT_FALSE(out.Contains(dk));
  EXPECT_EQ(out.LabelOf(*extractor_.Resolve("The Godfather")), Label::kPos);
}

TEST_F(DelexTest, RelexicalizeErrors) {
  PlaceholderMap map;
  const Attribute horror(AttributeKind::kGenre, "horror");
  map.Assign(horror);
  TurnTrackings current;
  current.user.Set(horror, Label::kPos);
  const KbRecommender rec(ExDKb());

  // Genres are only related to titles, so nothing fills a NEW genre here.
  PredictedTracking predicted(2);
  predicted.Set(Placeholder::New(AttributeKind::kGenre), Label::kPos);
  try {
    Relexicalize(predicted, map, rec, current, 2);
    FAIL() << "expected NoCandidateError";
  } catch (const NoCandidateError& e) {
    EXPECT_NE(std::string(e.what()).find("genre"), std::string::npos);
  }
  std::vector<AttributeKind> unfilled;
  const AttributeTracking lenient =
      RelexicalizeLenient(predicted, map, rec, current, 2, &unfilled);
  EXPECT_TRUE(lenient.empty());
  EXPECT_EQ(unfilled, std::vector<AttributeKind>{AttributeKind::kGenre});

  PredictedTracking missing(2);
  missing.Set(Placeholder::Indexed(AttributeKind::kPerson, 4), Label::kPos);
  EXPECT_THROW(Relexicalize(missing, map, rec, current, 2), InternalError);

  // A negative NEW placeholder names nothing and is dropped.
  PredictedTracking neg(2);
  neg.Set(Placeholder::New(AttributeKind::kGenre), Label::kNeg);
  EXPECT_TRUE(Relexicalize(neg, map, rec, current, 2).empty());
}

// Delexicalized text never contains a surface form the extractor finds,
// and mapping placeholders back through the map restores the original.
TEST_F(DelexTest, RoundTripOnRandomUtterances) {
  std::mt19937_64 rng(9);
  for (int i = 0; i < 300; ++i) {
    const Turn t = MakeTurn(Side::kUser, testing::RandomUserUtterance(rng, DemoKb()));
    PlaceholderMap map;
    const std::string delex = DelexicalizeText(t.text, t.mentions, map);
    ASSERT_TRUE(extractor_.Extract(delex).empty()) << delex;
    const std::vector<Placeholder> found = ScanPlaceholders(delex);
    std::set<Attribute> back;
    for (const Placeholder& p : found) back.insert(*map.Find(p));
    std::set<Attribute> orig;
    for (const AttributeMention& m : t.mentions) orig.insert(m.attribute);
    EXPECT_EQ(back, orig) << t.text;
  }
}

}  // namespace
}  // namespace attrdial
