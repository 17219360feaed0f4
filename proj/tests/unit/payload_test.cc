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

#include "attrdial/payload.h"

#include <gtest/gtest.h>

#include "attrdial/errors.h"
#include "fixtures.h"

namespace attrdial {
namespace {

using ::attrdial::testing::DemoKb;

const Attribute kDk(AttributeKind::kMovieTitle, "The Dark Knight");
const Attribute kCrime(AttributeKind::kGenre, "crime");

TEST(PayloadTest, RequireAccessors) {
  const Json j = ParseJson(R"({"s":"x","i":3,"b":true,"a":[1],"f":1.5})");
  EXPECT_EQ(RequireString(j, "s"), "x");
  EXPECT_EQ(RequireInt(j, "i"), 3);
  EXPECT_TRUE(RequireBool(j, "b"));
  EXPECT_EQ(RequireArray(j, "a").size(), 1u);
  EXPECT_THROW(RequireString(j, "i"), ParseError);
  EXPECT_THROW(RequireInt(j, "f"), ParseError);
  EXPECT_THROW(RequireBool(j, "s"), ParseError);
  EXPECT_THROW(RequireArray(j, "s"), ParseError);
  try {
    RequireField(j, "missing");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("missing"), std::string::npos);
  }
  EXPECT_THROW(RequireField(Json::array(), "x"), ParseError);
  EXPECT_THROW(ParseJson("{nope"), ParseError);
}

TEST(PayloadTest, AttributeRoundTrip) {
  const Json j = AttributeToJson(kDk);
  EXPECT_EQ(j.dump(),
            R"({"kind":"movie","id":"dark knight","display":"The Dark Knight"})");
  const Attribute back = AttributeFromJson(j);
  EXPECT_EQ(back, kDk);
  EXPECT_EQ(back.display(), kDk.display());
  EXPECT_THROW(AttributeFromJson(ParseJson(R"({"kind":"film","id":"x","display":"x"})")),
               ParseError);
}

TEST(PayloadTest, TrackingRoundTripThroughRegistry) {
  AttributeTracking t(Side::kSystem, 5);
  t.Set(kDk, Label::kNeg);
  t.Set(kCrime, Label::kPos);
  const Json j = TrackingToJson(t);
  EXPECT_EQ(j.dump(),
            R"({"side":"system","turn":5,"entries":[{"kind":"genre","id":"crime","label":"pos"},)"
            R"({"kind":"movie","id":"dark knight","label":"neg"}]})");
  const AttributeRegistry registry(DemoKb());
  const AttributeTracking back = TrackingFromJson(j, registry);
  EXPECT_EQ(back, t);
  EXPECT_EQ(back.Entries()[1].attribute.display(), "The Dark Knight");

  // Unknown ids keep the id as display.
  const Attribute unknown = registry.Resolve(AttributeKind::kGenre, "noir");
  EXPECT_EQ(unknown.display(), "noir");

  Json dup = j;
  dup["entries"].push_back(dup["entries"][0]);
  EXPECT_THROW(TrackingFromJson(dup, registry), ParseError);
  Json bad_side = j;
  bad_side["side"] = "both";
  EXPECT_THROW(TrackingFromJson(bad_side, registry), ParseError);
  Json bad_label = j;
  bad_label["entries"][0]["label"] = "maybe";
  EXPECT_THROW(TrackingFromJson(bad_label, registry), ParseError);
}

TEST(PayloadTest, PlaceholderEntriesRoundTrip) {
  PlaceholderTracking t(3);
  t.Set(*Placeholder::Parse("[GENRE_0]"), Label::kPos);
  t.Set(*Placeholder::Parse("[NEW_MOVIE]"), Label::kPos);
  const Json j = PlaceholderEntriesToJson(t);
  EXPECT_EQ(j.dump(),
            R"([{"placeholder":"[NEW_MOVIE]","label":"pos"},{"placeholder":"[GENRE_0]","label":"pos"}])");
  EXPECT_EQ(PlaceholderEntriesFromJson(j, 3), t);
  EXPECT_THROW(
      PlaceholderEntriesFromJson(ParseJson(R"([{"placeholder":"[X]","label":"pos"}])"), 3),
      ParseError);
  EXPECT_THROW(PlaceholderEntriesFromJson(Json::object(), 3), ParseError);
}

TEST(PayloadTest, DeltaRoundTrip) {
  AttributeDelta d;
  d.entries = {{kCrime, Label::kPos}, {kDk, Label::kNeg}};
  EXPECT_EQ(DeltaFromJson(DeltaToJson(d)), d);
  EXPECT_THROW(DeltaFromJson(Json::object()), ParseError);
}

TEST(PayloadTest, PolicyStateRoundTrip) {
  PolicyState s;
  EXPECT_EQ(PolicyStateFromJson(PolicyStateToJson(s)), s);
  s.positive_genres = 2;
  s.system_positive_persons = 1;
  s.last_status = RecommendationStatus::kRejected;
  s.reengaged = true;
  EXPECT_EQ(PolicyStateFromJson(PolicyStateToJson(s)), s);
  Json bad = PolicyStateToJson(s);
  bad["last_status"] = "lost";
  EXPECT_THROW(PolicyStateFromJson(bad), ParseError);
}

TEST(PayloadTest, QueryAndCandidatesRoundTrip) {
  RecommendationQuery q;
  q.positives = {kCrime};
  q.negatives = {kDk};
  q.exclude = {Attribute(AttributeKind::kMovieTitle, "Gravity")};
  q.target_kind = AttributeKind::kPerson;
  const auto [back, k] = QueryFromJson(QueryToJson(q, 4));
  EXPECT_EQ(k, 4);
  EXPECT_EQ(back.positives, q.positives);
  EXPECT_EQ(back.negatives, q.negatives);
  EXPECT_EQ(back.exclude, q.exclude);
  EXPECT_EQ(back.target_kind, q.target_kind);
  Json bad = QueryToJson(q, 4);
  bad["target_kind"] = "studio";
  EXPECT_THROW(QueryFromJson(bad), ParseError);

  const std::vector<ScoredCandidate> c = {{kDk, 2, {}}, {kCrime, -1, {}}};
  const auto cb = CandidatesFromJson(CandidatesToJson(c));
  ASSERT_EQ(cb.size(), 2u);
  EXPECT_EQ(cb[0].attribute, kDk);
  EXPECT_EQ(cb[1].score, -1);
  EXPECT_THROW(CandidatesFromJson(ParseJson(R"({"candidates":[{"attribute":{},"score":"x"}]})")),
               ParseError);
}

}  // namespace
}  // namespace attrdial
