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

#include "attrdial/kb.h"

#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "attrdial/errors.h"
#include "fixtures.h"

namespace attrdial {
namespace {

using ::attrdial::testing::DemoKb;
using ::attrdial::testing::ExDKb;

MovieKB LoadText(const std::string& text) {
  std::istringstream in(text);
  return MovieKB::Load(in);
}

Attribute Title(const std::string& s) {
  return Attribute(AttributeKind::kMovieTitle, s);
}
Attribute Genre(const std::string& s) {
  return Attribute(AttributeKind::kGenre, s);
}
Attribute Person(const std::string& s) {
  return Attribute(AttributeKind::kPerson, s);
}

TEST(AttributeTest, IdsAreCanonical) {
  EXPECT_EQ(Title("The Dark Knight").id(), "dark knight");
  EXPECT_EQ(Title("The Dark Knight").display(), "The Dark Knight");
  EXPECT_EQ(Person("Keri Russell").id(), "keri russell");
  EXPECT_EQ(Genre("Science Fiction").id(), "science fiction");
  EXPECT_EQ(Title("Mission: Impossible"), Title("mission impossible"));
  EXPECT_NE(Title("Drama"), Genre("Drama"));
  EXPECT_EQ(DebugString(Person("Tom Cruise")), "person:tom cruise");
}

TEST(AttributeTest, KindNamesRoundTrip) {
  for (AttributeKind k : kAllKinds) {
    EXPECT_EQ(ParseKind(KindName(k)), k);
  }
  EXPECT_FALSE(ParseKind("film").has_value());
}

TEST(MovieKBTest, LoadsDemoKb) {
  const MovieKB& kb = DemoKb();
  EXPECT_EQ(kb.movies().size(), 17u);
  const Attribute* dk = kb.Find(AttributeKind::kMovieTitle, "dark knight");
  ASSERT_NE(dk, nullptr);
  EXPECT_EQ(dk->display(), "The Dark Knight");
  EXPECT_TRUE(kb.Holds(*dk, Predicate::kHasGenre, Genre("crime")));
  EXPECT_TRUE(kb.Holds(Person("Christopher Nolan"), Predicate::kDirected, *dk));
  EXPECT_FALSE(kb.Holds(*dk, Predicate::kHasGenre, Genre("horror")));
  EXPECT_EQ(kb.Popularity(*dk), 94);
  // Persons take their best movie.
  EXPECT_EQ(kb.Popularity(Person("Christopher Nolan")), 94);
  EXPECT_EQ(kb.Popularity(Person("Nobody")), 0);
}

TEST(MovieKBTest, CastWithIsDerived) {
  const MovieKB& kb = ExDKb();
  const Attribute keri = Person("Keri Russell");
  const Attribute tom = Person("Tom Cruise");
  EXPECT_TRUE(kb.Holds(keri, Predicate::kCastWith, tom));
  EXPECT_TRUE(kb.Holds(tom, Predicate::kCastWith, keri));
  EXPECT_TRUE(kb.Related(keri, tom));
  EXPECT_FALSE(kb.Related(keri, keri));
  for (const Relation& r : kb.relations()) {
    EXPECT_NE(r.predicate, Predicate::kCastWith);
  }
  EXPECT_EQ(kb.relations().size(), 5u);
  EXPECT_EQ(kb.Neighbors(keri, Predicate::kCastWith),
            std::vector<Attribute>{tom});
}

TEST(MovieKBTest, NeighborsAreSortedAndSymmetric) {
  const MovieKB& kb = DemoKb();
  for (const Movie& m : kb.movies()) {
    const std::vector<Attribute> n = kb.Neighbors(m.title);
    EXPECT_TRUE(std::is_sorted(n.begin(), n.end()));
    for (const Attribute& a : n) {
      const std::vector<Attribute> back = kb.Neighbors(a);
      EXPECT_TRUE(std::binary_search(back.begin(), back.end(), m.title))
          << DebugString(a);
    }
  }
}

TEST(MovieKBTest, DuplicateTitlesGetYearSuffix) {
  const MovieKB kb = LoadText(
      R"({"title":"Aladdin","year":1992,"genres":["animation"]})"
      "\n"
      R"({"title":"Aladdin","year":2019,"genres":["fantasy"]})"
      "\n");
  ASSERT_EQ(kb.movies().size(), 2u);
  EXPECT_EQ(kb.movies()[0].title.id(), "aladdin 1992");
  EXPECT_EQ(kb.movies()[1].title.display(), "Aladdin (2019)");
  EXPECT_TRUE(kb.Holds(kb.movies()[0].title, Predicate::kHasGenre,
                       Genre("animation")));
}

TEST(MovieKBTest, RejectsBadInput) {
  try {
    LoadText("{\"title\":\"A\"}\n{oops\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  }
  EXPECT_THROW(LoadText(R"({"title":"A","rating":5})"), ParseError);
  EXPECT_THROW(LoadText(R"({"title":""})"), ParseError);
  EXPECT_THROW(LoadText(R"({"title":"A","year":"1999"})"), ParseError);
  EXPECT_THROW(LoadText(R"({"title":"A","genres":"drama"})"), ParseError);
  EXPECT_THROW(LoadText(R"({"title":"A","popularity":-1})"), ValidationError);
  EXPECT_THROW(LoadText(R"({"title":"A","year":1}
{"title":"The A","year":1})"),
               ValidationError);
  EXPECT_THROW(LoadText(R"({"title":"A"}
{"title":"A"})"),
               ValidationError);
  // One name used as both a genre and a person.
  EXPECT_THROW(LoadText(R"({"title":"A","genres":["Cher"],"actors":["Cher"]})"),
               ValidationError);
  EXPECT_THROW(MovieKB::LoadFile("/nonexistent/kb.jsonl"), ParseError);
}

TEST(MovieKBTest, SerializeRoundTripIsByteStable) {
  const std::string once = DemoKb().SerializeToString();
  const MovieKB again = LoadText(once);
  EXPECT_EQ(again.SerializeToString(), once);
  EXPECT_EQ(again.relations(), DemoKb().relations());
}

TEST(MovieKBTest, AgreesWithOracleOnRandomKbs) {
  std::mt19937_64 rng(11);
  for (int round = 0; round < 20; ++round) {
    const MovieKB kb = testing::RandomKb(rng, 12);
    std::vector<Attribute> all;
    for (AttributeKind k : kAllKinds) {
      EXPECT_EQ(kb.AttributesOfKind(k), testing::OracleAttributesOfKind(kb, k));
      for (const Attribute& a : kb.AttributesOfKind(k)) all.push_back(a);
    }
    for (const Attribute& a : all) {
      EXPECT_DOUBLE_EQ(kb.Popularity(a), testing::OraclePopularity(kb, a));
      for (const Attribute& b : all) {
        ASSERT_EQ(kb.Related(a, b), testing::OracleRelated(kb, a, b))
            << DebugString(a) << " " << DebugString(b);
        for (Predicate p : {Predicate::kHasGenre, Predicate::kActedIn,
                            Predicate::kDirected, Predicate::kCastWith}) {
          ASSERT_EQ(kb.Holds(a, p, b), testing::OracleHolds(kb, a, p, b));
        }
      }
    }
  }
}

}  // namespace
}  // namespace attrdial
