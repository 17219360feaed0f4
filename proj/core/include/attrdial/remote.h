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
// HTTP/JSON clients for model backends served out of process, and wrappers
// that fall back to the in-process reference when a backend misbehaves.

#ifndef ATTRDIAL_REMOTE_H_
#define ATTRDIAL_REMOTE_H_

#include <functional>
#include <string>
#include <vector>

#include "attrdial/generator.h"
#include "attrdial/payload.h"
#include "attrdial/predictor.h"
#include "attrdial/recommender.h"

namespace attrdial {

struct Endpoint {
  std::string url;  // "http://host:port/path"
  int timeout_ms = 2000;
};

// POSTs a JSON body and parses the JSON reply. Any transport failure,
// non-2xx status or unparsable body raises BackendError.
class JsonHttpClient {
 public:
  explicit JsonHttpClient(Endpoint endpoint);
  Json Post(const Json& body) const;

 private:
  Endpoint endpoint_;
  std::string origin_;  // scheme://host:port
  std::string path_;
};

// Request {"context", "positive_placeholders"}, reply {"entries"}.
class RemotePredictor : public SystemAttributePredictor {
 public:
  explicit RemotePredictor(Endpoint endpoint) : client_(std::move(endpoint)) {}
  PredictedTracking Predict(const PredictorInput& input) const override;

 private:
  JsonHttpClient client_;
};

// Request {"positives", "negatives", "target_kind", "exclude", "k"}, reply
// {"candidates": [{"attribute", "score"}]}.
class RemoteRecommender : public Recommender {
 public:
  explicit RemoteRecommender(Endpoint endpoint) : client_(std::move(endpoint)) {}
  std::vector<ScoredCandidate> Recommend(const RecommendationQuery& query,
                                         int k) const override;

 private:
  JsonHttpClient client_;
};

class FallbackPredictor : public SystemAttributePredictor {
 public:
  FallbackPredictor(const SystemAttributePredictor& primary,
                    const SystemAttributePredictor& fallback)
      : primary_(&primary), fallback_(&fallback) {}
  PredictedTracking Predict(const PredictorInput& input) const override;

 private:
  const SystemAttributePredictor* primary_;
  const SystemAttributePredictor* fallback_;
};

class FallbackRecommender : public Recommender {
 public:
  FallbackRecommender(const Recommender& primary, const Recommender& fallback)
      : primary_(&primary), fallback_(&fallback) {}
  std::vector<ScoredCandidate> Recommend(const RecommendationQuery& query,
                                         int k) const override;

 private:
  const Recommender* primary_;
  const Recommender* fallback_;
};

// What a delexicalized generator sees: placeholders only, never surface
// forms.
struct TextGenerationRequest {
  std::string context;
  std::vector<std::pair<Placeholder, Label>> delta;
  Phase phase = Phase::kSocial;
};

// A generator working on delexicalized text. Its output may contain
// placeholders, which the engine relexicalizes before display.
class TextGenerator {
 public:
  virtual ~TextGenerator() = default;
  virtual std::string Complete(const TextGenerationRequest& request) const = 0;
};

// Request {"context", "delta": [{"placeholder", "label"}], "phase"}, reply
// {"text"}.
class RemoteGenerator : public TextGenerator {
 public:
  explicit RemoteGenerator(Endpoint endpoint) : client_(std::move(endpoint)) {}
  std::string Complete(const TextGenerationRequest& request) const override;

 private:
  JsonHttpClient client_;
};

// Adapts a callable; handy for tests and for in-process models.
class FunctionGenerator : public TextGenerator {
 public:
  explicit FunctionGenerator(
      std::function<std::string(const TextGenerationRequest&)> fn)
      : fn_(std::move(fn)) {}
  std::string Complete(const TextGenerationRequest& request) const override {
    return fn_(request);
  }

 private:
  std::function<std::string(const TextGenerationRequest&)> fn_;
};

Json TextGenerationRequestToJson(const TextGenerationRequest& request);

}  // namespace attrdial

#endif  // ATTRDIAL_REMOTE_H_
