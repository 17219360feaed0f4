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

#include "attrdial/remote.h"

#include <httplib.h>

#include <algorithm>

#include "attrdial/errors.h"

namespace attrdial {

JsonHttpClient::JsonHttpClient(Endpoint endpoint)
    : endpoint_(std::move(endpoint)) {
  const std::string& url = endpoint_.url;
  const size_t scheme = url.find("://");
  if (scheme == std::string::npos || url.compare(0, scheme, "http") != 0) {
    throw ValidationError("backend url must start with http://: " + url);
  }
  const size_t slash = url.find('/', scheme + 3);
  origin_ = url.substr(0, slash);
  path_ = slash == std::string::npos ? "/" : url.substr(slash);
}

Json JsonHttpClient::Post(const Json& body) const {
  httplib::Client client(origin_);
  const time_t sec = endpoint_.timeout_ms / 1000;
  const time_t usec = (endpoint_.timeout_ms % 1000) * 1000;
  client.set_connection_timeout(sec, usec);
  client.set_read_timeout(sec, usec);
  client.set_write_timeout(sec, usec);
  auto result = client.Post(path_, body.dump(), "application/json");
  if (!result) {
    throw BackendError(endpoint_.url + ": " +
                       httplib::to_string(result.error()));
  }
  if (result->status < 200 || result->status >= 300) {
    throw BackendError(endpoint_.url + ": HTTP " +
                       std::to_string(result->status));
  }
  try {
    return ParseJson(result->body);
  } catch (const ParseError& e) {
    throw BackendError(endpoint_.url + ": " + e.what());
  }
}

PredictedTracking RemotePredictor::Predict(const PredictorInput& input) const {
  Json request = Json::object();
  request["context"] = input.context;
  Json positives = Json::array();
  for (const Placeholder& p : input.positive_placeholders) {
    positives.push_back(p.Render());
  }
  request["positive_placeholders"] = std::move(positives);
  const Json reply = client_.Post(request);
  try {
    return PlaceholderEntriesFromJson(RequireField(reply, "entries"),
                                      input.turn + 1);
  } catch (const ParseError& e) {
    throw BackendError(std::string("predictor reply: ") + e.what());
  }
}

std::vector<ScoredCandidate> RemoteRecommender::Recommend(
    const RecommendationQuery& query, int k) const {
  const Json reply = client_.Post(QueryToJson(query, k));
  try {
    std::vector<ScoredCandidate> out = CandidatesFromJson(reply);
    if (static_cast<int>(out.size()) > k) out.resize(std::max(k, 0));
    return out;
  } catch (const ParseError& e) {
    throw BackendError(std::string("recommender reply: ") + e.what());
  }
}

PredictedTracking FallbackPredictor::Predict(
    const PredictorInput& input) const {
  try {
    return primary_->Predict(input);
  } catch (const Error&) {
    return fallback_->Predict(input);
  }
}

std::vector<ScoredCandidate> FallbackRecommender::Recommend(
    const RecommendationQuery& query, int k) const {
  try {
    return primary_->Recommend(query, k);
  } catch (const Error&) {
    return fallback_->Recommend(query, k);
  }
}

Json TextGenerationRequestToJson(const TextGenerationRequest& request) {
  Json j = Json::object();
  j["context"] = request.context;
  Json delta = Json::array();
  for (const auto& [p, label] : request.delta) {
    Json e = Json::object();
    e["placeholder"] = p.Render();
    e["label"] = LabelName(label);
    delta.push_back(std::move(e));
  }
  j["delta"] = std::move(delta);
  j["phase"] = PhaseName(request.phase);
  return j;
}

std::string RemoteGenerator::Complete(
    const TextGenerationRequest& request) const {
  const Json reply = client_.Post(TextGenerationRequestToJson(request));
  try {
    return RequireString(reply, "text");
  } catch (const ParseError& e) {
    throw BackendError(std::string("generator reply: ") + e.what());
  }
}

}  // namespace attrdial
