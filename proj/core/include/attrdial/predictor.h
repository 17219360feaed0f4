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
// Next-turn system attribute prediction over placeholders, the reference
// rule policy, and the attribute delta.

#ifndef ATTRDIAL_PREDICTOR_H_
#define ATTRDIAL_PREDICTOR_H_

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "attrdial/delex.h"
#include "attrdial/dialog.h"
#include "attrdial/tracking.h"

namespace attrdial {

enum class RecommendationStatus { kOffered, kAccepted, kRejected };

std::string_view StatusName(RecommendationStatus s);
std::optional<RecommendationStatus> ParseStatus(std::string_view name);

struct RecommendationRecord {
  int turn = 0;  // 1-based turn that offered the title
  Attribute title;
  RecommendationStatus status = RecommendationStatus::kOffered;

  friend bool operator==(const RecommendationRecord&,
                         const RecommendationRecord&) = default;
};

// Applies a user's reaction to the live (latest) offer: an acceptance cue
// accepts it, a rejection cue rejects it. Only offered records move.
// Returns the record that changed, if any.
RecommendationRecord* ApplyUserReaction(std::vector<RecommendationRecord>& log,
                                        std::string_view user_text);

// What the reference policy looks at. Everything here is derived from the
// trackings, the recommendation log and the latest user turn.
struct PolicyState {
  int positive_titles = 0;
  int positive_genres = 0;
  int positive_persons = 0;
  int system_positive_persons = 0;
  std::optional<RecommendationStatus> last_status;  // of the live offer
  bool request_alternative = false;  // latest user turn asks for another
  bool reengaged = false;  // system already spoke since the last rejection
  bool closing = false;    // latest user turn says goodbye

  friend bool operator==(const PolicyState&, const PolicyState&) = default;
};

// Summarizes the state after the last turn of context. The trackings are
// the current ones; the log must only hold offers made inside context.
PolicyState SummarizeState(std::span<const Turn> context,
                           const TurnTrackings& current,
                           std::span<const RecommendationRecord> log);

struct PredictorInput {
  int turn = 0;         // index i of the current turn; predictions are i+1
  std::string context;  // delexicalized "user: ..." / "system: ..." lines
  // Positive placeholders of the current user and system trackings, in
  // first-mention order.
  std::vector<Placeholder> positive_placeholders;
  PolicyState state;
};

// Delexicalizes the context and trackings (extending map) into a predictor
// input.
PredictorInput BuildPredictorInput(std::span<const Turn> context,
                                   const TurnTrackings& current, int turn,
                                   const PolicyState& state,
                                   PlaceholderMap& map);

// Every placeholder rendering found in text, in order of first occurrence.
std::vector<Placeholder> ScanPlaceholders(std::string_view text);

class SystemAttributePredictor {
 public:
  virtual ~SystemAttributePredictor() = default;
  virtual PredictedTracking Predict(const PredictorInput& input) const = 0;
};

// Deterministic rule cascade:
//  1. nothing positive yet, an accepted offer, or a goodbye -> empty
//     (an explicit request for another title still gets [NEW_MOVIE])
//  2. positives but no offer yet -> positives + [NEW_MOVIE]
//  3. live offer rejected -> positives only the first time (re-engage),
//     positives + [NEW_MOVIE] on an explicit request or once re-engaged
//  4. live offer pending -> positives + [NEW_PERSON] until the system side
//     holds two positive persons, then positives + [NEW_MOVIE]
class ReferencePolicy : public SystemAttributePredictor {
 public:
  PredictedTracking Predict(const PredictorInput& input) const override;
};

// Emits exactly the gold tracking it was constructed with.
class FixedPredictor : public SystemAttributePredictor {
 public:
  explicit FixedPredictor(PredictedTracking fixed) : fixed_(std::move(fixed)) {}
  PredictedTracking Predict(const PredictorInput&) const override {
    return fixed_;
  }

 private:
  PredictedTracking fixed_;
};

// Runs the predictor and enforces the closed world: an indexed placeholder
// that appears neither in the context nor among the positives is unseen and
// becomes the NEW placeholder of its kind. The result's turn is i+1.
PredictedTracking Predict(const PredictorInput& input,
                          const SystemAttributePredictor& predictor);

struct AttributeDelta {
  std::vector<TrackingEntry> entries;  // ordered by attribute

  bool empty() const { return entries.empty(); }
  bool Has(AttributeKind kind, Label label) const;
  std::vector<Attribute> Of(AttributeKind kind, Label label) const;

  friend bool operator==(const AttributeDelta&, const AttributeDelta&) =
      default;
};

// Entries of predicted whose (attribute, label) pair is not in current.
AttributeDelta ComputeDelta(const AttributeTracking& predicted,
                            const AttributeTracking& current);

}  // namespace attrdial

#endif  // ATTRDIAL_PREDICTOR_H_
