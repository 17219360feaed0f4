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

#include "attrdial/eval.h"

#include <fstream>
#include <random>

#include <gtest/gtest.h>

#include "fixtures.h"

namespace attrdial {
namespace {

using ::attrdial::testing::DemoKb;
using ::attrdial::testing::DemoPatterns;
using ::attrdial::testing::TestDataPath;

PredictedTracking Tracking(std::vector<std::pair<const char*, Label>> entries) {
  PredictedTracking t;
  for (const auto& [p, l] : entries) t.Set(*Placeholder::Parse(p), l);
  return t;
}

constexpr Label kPos = Label::kPos;
constexpr Label kNeg = Label::kNeg;

TEST(TokenSequenceTest, PlaceholderOrderWithNegSuffix) {
  EXPECT_EQ(TokenSequence(Tracking({{"[GENRE_0]", kPos},
                                    {"[NEW_MOVIE]", kPos},
                                    {"[MOVIE_1]", kNeg}})),
            (std::vector<std::string>{"[MOVIE_1]/neg", "[NEW_MOVIE]",
                                      "[GENRE_0]"}));
}

TEST(ScoreExampleTest, HalfOverlap) {
  const ExampleScore s =
      ScoreExample(Tracking({{"[GENRE_0]", kPos}, {"[GENRE_1]", kPos}}),
                   Tracking({{"[GENRE_0]", kPos}, {"[GENRE_2]", kPos}}));
  EXPECT_EQ(s.tp, 1);
  EXPECT_EQ(s.fp, 1);
  EXPECT_EQ(s.fn, 1);
  EXPECT_FALSE(s.exact);
  EXPECT_EQ(s.tokens_correct, 1);
  EXPECT_EQ(s.tokens, 2);
  MetricReport r;
  r.Add(s);
  r.Finalize();
  EXPECT_DOUBLE_EQ(r.token_accuracy, 0.5);
  EXPECT_DOUBLE_EQ(r.precision, 0.5);
  EXPECT_DOUBLE_EQ(r.recall, 0.5);
  EXPECT_DOUBLE_EQ(r.f1, 0.5);
  EXPECT_DOUBLE_EQ(r.set_accuracy, 0.0);
}

TEST(ScoreExampleTest, LabelMismatchIsAMiss) {
  const ExampleScore s = ScoreExample(Tracking({{"[MOVIE_0]", kNeg}}),
                                      Tracking({{"[MOVIE_0]", kPos}}));
  EXPECT_EQ(s.tp, 0);
  EXPECT_EQ(s.fp, 1);
  EXPECT_EQ(s.fn, 1);
  EXPECT_EQ(s.tokens_correct, 0);
}

TEST(ScoreExampleTest, LengthMismatchUsesLongerSequence) {
  const ExampleScore s = ScoreExample(Tracking({{"[GENRE_0]", kPos}}),
                                      Tracking({{"[GENRE_0]", kPos},
                                                {"[NEW_PERSON]", kPos},
                                                {"[NEW_MOVIE]", kPos}}));
  EXPECT_EQ(s.tokens, 3);
  // Token positions: [NEW_MOVIE] [GENRE_0] [NEW_PERSON] vs [GENRE_0].
  EXPECT_EQ(s.tokens_correct, 0);
}

TEST(MetricReportTest, EmptyDenominators) {
  MetricReport none;
  none.Finalize();
  EXPECT_DOUBLE_EQ(none.token_accuracy, 1.0);
  EXPECT_DOUBLE_EQ(none.set_accuracy, 1.0);
  EXPECT_DOUBLE_EQ(none.precision, 1.0);
  EXPECT_DOUBLE_EQ(none.recall, 1.0);

  MetricReport missed;
  missed.Add(ScoreExample(PredictedTracking(), Tracking({{"[GENRE_0]", kPos}})));
  missed.Finalize();
  EXPECT_DOUBLE_EQ(missed.precision, 0.0);
  EXPECT_DOUBLE_EQ(missed.recall, 0.0);
  EXPECT_DOUBLE_EQ(missed.f1, 0.0);

  MetricReport both_empty;
  both_empty.Add(ScoreExample(PredictedTracking(), PredictedTracking()));
  both_empty.Finalize();
  EXPECT_DOUBLE_EQ(both_empty.set_accuracy, 1.0);
  EXPECT_DOUBLE_EQ(both_empty.token_accuracy, 1.0);
}

class CorpusEvalTest : public ::testing::Test {
 protected:
  CorpusEvalTest() : extractor_(DemoKb(), DemoPatterns()) {
    const AttributeRegistry registry(DemoKb());
    corpus_ = LoadCorpusFile(TestDataPath("annotate_corpus.jsonl"), registry);
    for (CorpusDialog& d : corpus_) {
      if (!d.recommendations.empty()) d.gold = Annotate(d, extractor_).gold;
    }
  }
  MentionExtractor extractor_;
  std::vector<CorpusDialog> corpus_;
};

TEST_F(CorpusEvalTest, ExamplesFollowUserTurns) {
  const std::vector<EvalExample> ex = BuildExamples(corpus_[0], extractor_);
  ASSERT_EQ(ex.size(), 2u);
  EXPECT_EQ(ex[0].turn, 1);
  EXPECT_EQ(ex[1].turn, 3);
  EXPECT_EQ(ex[0].input.context, "user: Hi! I am looking for a [GENRE_0] movie.");
  // Gold after turn 1 is the recommended title, unseen so far.
  EXPECT_EQ(TokenSequence(ex[0].gold), std::vector<std::string>{"[NEW_MOVIE]"});
  EXPECT_EQ(ex[1].input.state.last_status, RecommendationStatus::kRejected);
  CorpusDialog no_gold = corpus_[0];
  no_gold.gold.reset();
  EXPECT_TRUE(BuildExamples(no_gold, extractor_).empty());
}

TEST_F(CorpusEvalTest, OracleIsPerfectEmptyHasNoRecall) {
  const EvalRun oracle = ScoreCorpus(corpus_, extractor_, *NamedPredictor("oracle"));
  EXPECT_DOUBLE_EQ(oracle.report.token_accuracy, 1.0);
  EXPECT_DOUBLE_EQ(oracle.report.set_accuracy, 1.0);
  EXPECT_DOUBLE_EQ(oracle.report.f1, 1.0);
  const EvalRun empty = ScoreCorpus(corpus_, extractor_, *NamedPredictor("empty"));
  EXPECT_DOUBLE_EQ(empty.report.recall, 0.0);
  EXPECT_FALSE(NamedPredictor("gpt").has_value());
}

TEST_F(CorpusEvalTest, ReferenceMatchesHandScoredSheet) {
  std::ifstream in(TestDataPath("eval_expected.json"));
  const Json want = Json::parse(in);
  const EvalRun run =
      ScoreCorpus(corpus_, extractor_, *NamedPredictor("reference"));
  const MetricReport& r = run.report;
  const Json& t = want["totals"];
  EXPECT_EQ(r.examples, t["examples"].get<int>());
  EXPECT_EQ(r.skipped_dialogs, t["skipped_dialogs"].get<int>());
  EXPECT_EQ(r.exact_matches, t["exact_matches"].get<int>());
  EXPECT_EQ(r.tokens_correct, t["tokens_correct"].get<int>());
  EXPECT_EQ(r.tokens, t["tokens"].get<int>());
  EXPECT_EQ(r.tp, t["tp"].get<int>());
  EXPECT_EQ(r.fp, t["fp"].get<int>());
  EXPECT_EQ(r.fn, t["fn"].get<int>());
  auto ratio = [&t](const char* key) {
    return t[key][0].get<double>() / t[key][1].get<double>();
  };
  EXPECT_NEAR(r.token_accuracy, ratio("token_accuracy"), 1e-9);
  EXPECT_NEAR(r.set_accuracy, ratio("set_accuracy"), 1e-9);
  EXPECT_NEAR(r.precision, ratio("precision"), 1e-9);
  EXPECT_NEAR(r.recall, ratio("recall"), 1e-9);
  EXPECT_NEAR(r.f1, ratio("f1"), 1e-9);

  ASSERT_EQ(run.rows.size(), want["rows"].size());
  for (size_t i = 0; i < run.rows.size(); ++i) {
    const Json& w = want["rows"][i];
    const ExampleRow& row = run.rows[i];
    EXPECT_EQ(row.dialog_id, w["dialog"].get<std::string>());
    EXPECT_EQ(row.turn, w["turn"].get<int>());
    EXPECT_EQ(row.score.tp, w["tp"].get<int>()) << row.dialog_id << " " << row.turn;
    EXPECT_EQ(row.score.fp, w["fp"].get<int>()) << row.dialog_id << " " << row.turn;
    EXPECT_EQ(row.score.fn, w["fn"].get<int>()) << row.dialog_id << " " << row.turn;
    EXPECT_EQ(row.score.exact, w["exact"].get<bool>());
    EXPECT_EQ(row.score.tokens_correct, w["tokens_correct"].get<int>());
    EXPECT_EQ(row.score.tokens, w["tokens"].get<int>());
  }
}

TEST_F(CorpusEvalTest, ReportIgnoresCorpusOrder) {
  const PredictFn reference = *NamedPredictor("reference");
  const Json base = ReportToJson(ScoreCorpus(corpus_, extractor_, reference).report);
  std::mt19937_64 rng(4);
  for (int i = 0; i < 5; ++i) {
    std::vector<CorpusDialog> shuffled = corpus_;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    EXPECT_EQ(ReportToJson(ScoreCorpus(shuffled, extractor_, reference).report),
              base);
  }
}

TEST_F(CorpusEvalTest, ReportRendering) {
  const EvalRun run =
      ScoreCorpus(corpus_, extractor_, *NamedPredictor("reference"));
  const std::string table = ReportToTable(run.report);
  EXPECT_NE(table.find("token_accuracy"), std::string::npos);
  EXPECT_NE(table.find("0.3750"), std::string::npos);
  const Json rows = RowsToJson(run.rows);
  EXPECT_EQ(rows.size(), run.rows.size());
}

}  // namespace
}  // namespace attrdial
