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
// Per-turn orchestration: extract, track, delexicalize, predict,
// relexicalize, diff, generate. A DialogSession is a plain value; the
// Engine holds the shared read-only pieces (KB, patterns, backends).

#ifndef ATTRDIAL_ENGINE_H_
#define ATTRDIAL_ENGINE_H_

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "attrdial/delex.h"
#include "attrdial/dialog.h"
#include "attrdial/extract.h"
#include "attrdial/generator.h"
#include "attrdial/kb.h"
#include "attrdial/payload.h"
#include "attrdial/predictor.h"
#include "attrdial/recommender.h"
#include "attrdial/remote.h"
#include "attrdial/tracking.h"

namespace attrdial {

// Per-session knobs; part of the session snapshot.
struct SessionConfig {
  uint64_t template_seed = 0;
  int max_history_tokens = 1024;     // predictor input budget, in words
  int labeler_context_tokens = 512;  // labeler context budget, in words

  friend bool operator==(const SessionConfig&, const SessionConfig&) = default;
};

// Throws ValidationError when a limit is not positive.
void ValidateSessionConfig(const SessionConfig& config);

// Everything recorded for one system response.
struct StepRecord {
  int user_turn = 0;  // 0 when the system opened the dialog
  int system_turn = 0;
  std::vector<LabelerDecision> decisions;         // at the user turn
  std::vector<LabelerDecision> system_decisions;  // at the system turn
  PolicyState state;
  std::vector<Placeholder> positive_placeholders;
  PredictedTracking prediction;
  AttributeTracking relexicalized;
  std::vector<AttributeKind> unfilled;  // NEW kinds nobody could fill
  AttributeDelta delta;
  Phase phase = Phase::kElicit;
  std::string generator = "template";  // template | remote | template_fallback
  bool predictor_failed = false;
  bool labeler_failed = false;
  std::vector<std::string> violations;  // end-of-turn invariant failures
};

struct DialogSession {
  std::string id;
  SessionConfig config;
  bool closed = false;
  std::vector<Turn> turns;
  std::vector<TurnTrackings> trackings;  // trackings[i-1] is turn i
  PlaceholderMap map;
  std::vector<StepRecord> steps;
  std::vector<RecommendationRecord> recommendations;

  int turn_count() const { return static_cast<int>(turns.size()); }
  // The trackings after the last turn; empty ones for a fresh session.
  TurnTrackings Current() const;
};

// Keeps whole turns from the end while the word count stays within limit.
// Turns from the latest user turn on are always kept, even over the limit.
std::span<const Turn> TruncateContext(std::span<const Turn> turns,
                                      size_t limit);

// Optional replacements for the reference components. Null members use the
// reference implementation. Pointers must outlive the engine.
struct EngineBackends {
  const AttributeLabeler* labeler = nullptr;
  const SystemAttributePredictor* predictor = nullptr;
  const Recommender* recommender = nullptr;
  const TextGenerator* text_generator = nullptr;
};

struct StepResult {
  Response response;
  const StepRecord* record = nullptr;  // points into the session
};

class Engine {
 public:
  Engine(const MovieKB& kb, const GenrePatternSet& patterns,
         EngineBackends backends = {});

  DialogSession NewSession(std::string id, SessionConfig config = {}) const;

  // Runs one user turn through the pipeline and appends the user and system
  // turns. Throws SessionClosedError on a closed session and
  // ValidationError on blank text; backend failures degrade instead.
  StepResult Step(DialogSession& session, std::string_view user_text) const;

  // Lets the system speak first. Only valid on an empty session.
  StepResult Greet(DialogSession& session) const;

  // Full inspectable snapshot; LoadSession(SessionState(s)) reproduces s.
  Json SessionState(const DialogSession& session) const;
  DialogSession LoadSession(const Json& snapshot) const;

  const MovieKB& kb() const { return *kb_; }
  const MentionExtractor& extractor() const { return extractor_; }
  const GenrePatternSet& patterns() const { return *patterns_; }

 private:
  struct Generated {
    Response response;
    std::string source;
  };

  Turn MakeTurn(Side speaker, std::string_view text) const;
  void AppendTurn(DialogSession& session, Turn turn) const;
  TrackResult TrackLatest(const DialogSession& session, StepRecord& record) const;
  void Respond(DialogSession& session, StepRecord record,
               StepResult& result) const;
  Generated GenerateText(DialogSession& session, const GenerationInput& input,
                         const std::string& delex_context) const;
  std::vector<std::string> CheckInvariants(const DialogSession& session,
                                           const StepRecord& record,
                                           const Response& response) const;

  const MovieKB* kb_;
  const GenrePatternSet* patterns_;
  MentionExtractor extractor_;
  EngineBackends backends_;
  ReferenceLabeler reference_labeler_;
  ReferencePolicy reference_policy_;
  KbRecommender kb_recommender_;
};

// Step record and session payload pieces, shared with the service.
Json StepRecordToJson(const StepRecord& record);
Json RecommendationsToJson(std::span<const RecommendationRecord> log);

}  // namespace attrdial

#endif  // ATTRDIAL_ENGINE_H_
