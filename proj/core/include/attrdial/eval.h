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
//
// Placeholder prediction metrics: per-token accuracy, exact set accuracy and
// micro precision/recall/F1, scored against annotated corpora.

#ifndef ATTRDIAL_EVAL_H_
#define ATTRDIAL_EVAL_H_

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "attrdial/datapipe.h"
#include "attrdial/delex.h"
#include "attrdial/extract.h"
#include "attrdial/payload.h"
#include "attrdial/predictor.h"

namespace attrdial {

// Placeholder renderings in placeholder order; negative entries get a
// "/neg" suffix.
std::vector<std::string> TokenSequence(const PredictedTracking& t);

struct ExampleScore {
  int tp = 0;
  int fp = 0;
  int fn = 0;
  bool exact = false;
  int tokens_correct = 0;
  int tokens = 0;  // max of the two sequence lengths

  friend bool operator==(const ExampleScore&, const ExampleScore&) = default;
};

// Entries are (placeholder, label) pairs. Token sequences are compared
// position by position.
ExampleScore ScoreExample(const PredictedTracking& predicted,
                          const PredictedTracking& gold);

struct MetricReport {
  int examples = 0;
  int skipped_dialogs = 0;  // dialogs without gold
  int exact_matches = 0;
  int tokens_correct = 0;
  int tokens = 0;
  int tp = 0;
  int fp = 0;
  int fn = 0;
  double token_accuracy = 1.0;
  double set_accuracy = 1.0;
  double precision = 1.0;
  double recall = 1.0;
  double f1 = 1.0;

  // Adds an example's tallies; call Finalize once all are in.
  void Add(const ExampleScore& s);
  // Empty denominators count as perfect: no tokens -> token accuracy 1, no
  // predictions -> precision 1 when there was nothing to find, else 0.
  void Finalize();
};

// One scored position: the system turn after user turn `turn`.
struct EvalExample {
  std::string dialog_id;
  int turn = 0;
  PredictorInput input;
  PredictedTracking gold;
};

// Builds one example per user turn followed by a system turn. Each example
// gets a fresh placeholder map. The current trackings and the policy state
// come from the gold annotation and the recommendation events up to the
// user turn; the gold next tracking keeps the positive system entries of the
// following turn, with attributes the map does not know turned into NEW
// placeholders. Returns nothing when the dialog has no gold.
std::vector<EvalExample> BuildExamples(const CorpusDialog& dialog,
                                       const MentionExtractor& extractor);

using PredictFn = std::function<PredictedTracking(const EvalExample&)>;

// "reference", "oracle" or "empty"; nullopt for other names.
std::optional<PredictFn> NamedPredictor(std::string_view name);

struct ExampleRow {
  std::string dialog_id;
  int turn = 0;
  PredictedTracking predicted;
  PredictedTracking gold;
  ExampleScore score;
};

struct EvalRun {
  MetricReport report;
  std::vector<ExampleRow> rows;
};

// Predictions go through the closed-world Predict wrapper, so unseen
// indexed placeholders count as NEW.
EvalRun ScoreCorpus(const std::vector<CorpusDialog>& corpus,
                    const MentionExtractor& extractor,
                    const PredictFn& predict);

Json ReportToJson(const MetricReport& report);
Json RowsToJson(const std::vector<ExampleRow>& rows);
// Two aligned columns, one metric per line.
std::string ReportToTable(const MetricReport& report);

}  // namespace attrdial

#endif  // ATTRDIAL_EVAL_H_
