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
// JSON forms of the core value types. Objects keep their keys in insertion
// order so that serialized payloads are byte-stable.

#ifndef ATTRDIAL_PAYLOAD_H_
#define ATTRDIAL_PAYLOAD_H_

#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "attrdial/delex.h"
#include "attrdial/kb.h"
#include "attrdial/predictor.h"
#include "attrdial/recommender.h"
#include "attrdial/tracking.h"

namespace attrdial {

using Json = nlohmann::ordered_json;

// Field accessors that raise ParseError naming the field.
const Json& RequireField(const Json& j, std::string_view key);
std::string RequireString(const Json& j, std::string_view key);
int64_t RequireInt(const Json& j, std::string_view key);
bool RequireBool(const Json& j, std::string_view key);
const Json& RequireArray(const Json& j, std::string_view key);
// Parses text, mapping nlohmann errors to ParseError.
Json ParseJson(std::string_view text);

// Known attributes by (kind, id), for payloads that carry only ids.
class AttributeRegistry {
 public:
  AttributeRegistry() = default;
  explicit AttributeRegistry(const MovieKB& kb);

  void Add(const Attribute& a) { attrs_.insert_or_assign({a.kind(), a.id()}, a); }
  // Unknown ids come back with the id as display.
  Attribute Resolve(AttributeKind kind, const std::string& id) const;
  const std::map<std::pair<AttributeKind, std::string>, Attribute>& all()
      const {
    return attrs_;
  }

 private:
  std::map<std::pair<AttributeKind, std::string>, Attribute> attrs_;
};

// {"kind": "movie", "id": "...", "display": "..."}
Json AttributeToJson(const Attribute& a);
Attribute AttributeFromJson(const Json& j);

// {"side": ..., "turn": ..., "entries": [{"kind", "id", "label"}]}
Json TrackingToJson(const AttributeTracking& t);
AttributeTracking TrackingFromJson(const Json& j,
                                   const AttributeRegistry& registry);

// [{"placeholder": "[GENRE_0]", "label": "pos"}]
Json PlaceholderEntriesToJson(const PlaceholderTracking& t);
PlaceholderTracking PlaceholderEntriesFromJson(const Json& entries, int turn);

// [{"kind", "id", "display", "label"}]
Json DeltaToJson(const AttributeDelta& delta);
AttributeDelta DeltaFromJson(const Json& j);

Json PolicyStateToJson(const PolicyState& s);
PolicyState PolicyStateFromJson(const Json& j);

// Remote recommender wire forms.
Json QueryToJson(const RecommendationQuery& q, int k);
std::pair<RecommendationQuery, int> QueryFromJson(const Json& j);
Json CandidatesToJson(const std::vector<ScoredCandidate>& candidates);
std::vector<ScoredCandidate> CandidatesFromJson(const Json& j);

}  // namespace attrdial

#endif  // ATTRDIAL_PAYLOAD_H_
