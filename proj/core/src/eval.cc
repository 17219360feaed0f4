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

#include <algorithm>
#include <cstdio>
#include <set>
#include <span>

namespace attrdial {
namespace {

// Lets a PredictFn run behind the closed-world Predict wrapper.
class ExamplePredictor : public SystemAttributePredictor {
 public:
  ExamplePredictor(const PredictFn& fn, const EvalExample& example)
      : fn_(fn), example_(example) {}
  PredictedTracking Predict(const PredictorInput&) const override {
    return fn_(example_);
  }

 private:
  const PredictFn& fn_;
  const EvalExample& example_;
};

double Ratio(int num, int den, double if_empty) {
  return den == 0 ? if_empty : static_cast<double>(num) / den;
}

}  // namespace

std::vector<std::string> TokenSequence(const PredictedTracking& t) {
  std::vector<std::string> out;
  for (const auto& [p, label] : t.entries()) {
    out.push_back(label == Label::kNeg ? p.Render() + "/neg" : p.Render());
  }
  return out;
}

ExampleScore ScoreExample(const PredictedTracking& predicted,
                          const PredictedTracking& gold) {
  ExampleScore s;
  const auto& p = predicted.entries();
  const auto& g = gold.entries();
  for (const auto& [ph, label] : p) {
    auto it = g.find(ph);
    if (it != g.end() && it->second == label) {
      ++s.tp;
    } else {
      ++s.fp;
    }
  }
  s.fn = static_cast<int>(g.size()) - s.tp;
  s.exact = p == g;

  const std::vector<std::string> ps = TokenSequence(predicted);
  const std::vector<std::string> gs = TokenSequence(gold);
  s.tokens = static_cast<int>(std::max(ps.size(), gs.size()));
  for (size_t i = 0; i < std::min(ps.size(), gs.size()); ++i) {
    if (ps[i] == gs[i]) ++s.tokens_correct;
  }
  return s;
}

void MetricReport::Add(const ExampleScore& s) {
  ++examples;
  exact_matches += s.exact ? 1 : 0;
  tokens_correct += s.tokens_correct;
  tokens += s.tokens;
  tp += s.tp;
  fp += s.fp;
  fn += s.fn;
}

void MetricReport::Finalize() {
  token_accuracy = Ratio(tokens_correct, tokens, 1.0);
  set_accuracy = Ratio(exact_matches, examples, 1.0);
  precision = Ratio(tp, tp + fp, tp + fn == 0 ? 1.0 : 0.0);
  recall = Ratio(tp, tp + fn, tp + fp == 0 ? 1.0 : 0.0);
  f1 = precision + recall == 0.0
           ? 0.0
           : 2.0 * precision * recall / (precision + recall);
}

std::vector<EvalExample> BuildExamples(const CorpusDialog& dialog,
                                       const MentionExtractor& extractor) {
  std::vector<EvalExample> out;
  if (!dialog.gold || dialog.gold->empty()) return out;
  const std::vector<TurnTrackings>& gold = *dialog.gold;
  const std::vector<Turn> turns = ExtractTurns(dialog, extractor);
  const std::vector<Attribute> events = ResolveEvents(dialog, extractor);

  std::vector<RecommendationRecord> log;
  for (size_t k = 0; k < turns.size(); ++k) {
    const int turn = static_cast<int>(k) + 1;
    if (turns[k].speaker == Side::kUser) {
      ApplyUserReaction(log, turns[k].text);
      if (k + 1 < turns.size() && turns[k + 1].speaker == Side::kSystem) {
        EvalExample ex;
        ex.dialog_id = dialog.id;
        ex.turn = turn;
        PlaceholderMap map;
        const std::span<const Turn> context(turns.data(), k + 1);
        const PolicyState state = SummarizeState(context, gold[k], log);
        ex.input = BuildPredictorInput(context, gold[k], turn, state, map);

        std::set<Placeholder> known(ex.input.positive_placeholders.begin(),
                                    ex.input.positive_placeholders.end());
        for (const Placeholder& p : ScanPlaceholders(ex.input.context)) {
          known.insert(p);
        }
        ex.gold = PredictedTracking(turn + 1);
        for (const auto& [a, label] : gold[k + 1].system.map()) {
          if (label != Label::kPos) continue;
          auto p = map.Find(a);
          ex.gold.Set(p && known.count(*p) ? *p : Placeholder::New(a.kind()),
                      Label::kPos);
        }
        out.push_back(std::move(ex));
      }
    }
    for (size_t e = 0; e < events.size(); ++e) {
      if (dialog.recommendations[e].turn == turn) {
        log.push_back({turn, events[e], RecommendationStatus::kOffered});
      }
    }
  }
  return out;
}

std::optional<PredictFn> NamedPredictor(std::string_view name) {
  if (name == "reference") {
    return PredictFn([](const EvalExample& ex) {
      static const ReferencePolicy policy;
      return policy.Predict(ex.input);
    });
  }
  if (name == "oracle") {
    return PredictFn([](const EvalExample& ex) { return ex.gold; });
  }
  if (name == "empty") {
    return PredictFn(
        [](const EvalExample& ex) { return PredictedTracking(ex.turn + 1); });
  }
  return std::nullopt;
}

EvalRun ScoreCorpus(const std::vector<CorpusDialog>& corpus,
                    const MentionExtractor& extractor,
                    const PredictFn& predict) {
  EvalRun run;
  for (const CorpusDialog& dialog : corpus) {
    if (!dialog.gold || dialog.gold->empty()) {
      ++run.report.skipped_dialogs;
      continue;
    }
    for (const EvalExample& ex : BuildExamples(dialog, extractor)) {
      ExampleRow row;
      row.dialog_id = ex.dialog_id;
      row.turn = ex.turn;
      row.predicted = Predict(ex.input, ExamplePredictor(predict, ex));
      row.gold = ex.gold;
      row.score = ScoreExample(row.predicted, row.gold);
      run.report.Add(row.score);
      run.rows.push_back(std::move(row));
    }
  }
  run.report.Finalize();
  return run;
}

Json ReportToJson(const MetricReport& r) {
  Json j = Json::object();
  j["token_accuracy"] = r.token_accuracy;
  j["set_accuracy"] = r.set_accuracy;
  j["precision"] = r.precision;
  j["recall"] = r.recall;
  j["f1"] = r.f1;
  j["examples"] = r.examples;
  j["skipped_dialogs"] = r.skipped_dialogs;
  j["exact_matches"] = r.exact_matches;
  j["tokens"] = r.tokens;
  j["tokens_correct"] = r.tokens_correct;
  j["tp"] = r.tp;
  j["fp"] = r.fp;
  j["fn"] = r.fn;
  return j;
}

Json RowsToJson(const std::vector<ExampleRow>& rows) {
  Json out = Json::array();
  for (const ExampleRow& row : rows) {
    Json j = Json::object();
    j["dialog"] = row.dialog_id;
    j["turn"] = row.turn;
    j["predicted"] = TokenSequence(row.predicted);
    j["gold"] = TokenSequence(row.gold);
    j["tp"] = row.score.tp;
    j["fp"] = row.score.fp;
    j["fn"] = row.score.fn;
    j["exact"] = row.score.exact;
    j["tokens_correct"] = row.score.tokens_correct;
    j["tokens"] = row.score.tokens;
    out.push_back(std::move(j));
  }
  return out;
}

std::string ReportToTable(const MetricReport& r) {
  const std::pair<const char*, double> metrics[] = {
      {"token_accuracy", r.token_accuracy},
      {"set_accuracy", r.set_accuracy},
      {"precision", r.precision},
      {"recall", r.recall},
      {"f1", r.f1},
  };
  const std::pair<const char*, int> counts[] = {
      {"examples", r.examples},         {"skipped_dialogs", r.skipped_dialogs},
      {"exact_matches", r.exact_matches}, {"tokens", r.tokens},
      {"tokens_correct", r.tokens_correct}, {"tp", r.tp},
      {"fp", r.fp},                     {"fn", r.fn},
  };
  std::string out;
  char line[64];
  for (const auto& [name, value] : metrics) {
    std::snprintf(line, sizeof(line), "%-16s %8.4f\n", name, value);
    out += line;
  }
  for (const auto& [name, value] : counts) {
    std::snprintf(line, sizeof(line), "%-16s %8d\n", name, value);
    out += line;
  }
  return out;
}

}  // namespace attrdial
