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

#include <cmath>

#include "attrdial/errors.h"

namespace attrdial {
namespace {

AttributeKind RequireKind(const Json& j) {
  const std::string name = RequireString(j, "kind");
  auto kind = ParseKind(name);
  if (!kind) throw ParseError("unknown attribute kind \"" + name + "\"");
  return *kind;
}

Label RequireLabel(const Json& j) {
  const std::string name = RequireString(j, "label");
  auto label = ParseLabel(name);
  if (!label) throw ParseError("unknown label \"" + name + "\"");
  return *label;
}

Json AttributeList(const std::set<Attribute>& attrs) {
  Json out = Json::array();
  for (const Attribute& a : attrs) out.push_back(AttributeToJson(a));
  return out;
}

std::set<Attribute> AttributeSet(const Json& j, std::string_view key) {
  std::set<Attribute> out;
  for (const Json& a : RequireArray(j, key)) out.insert(AttributeFromJson(a));
  return out;
}

}  // namespace

const Json& RequireField(const Json& j, std::string_view key) {
  if (!j.is_object()) throw ParseError("expected a JSON object");
  auto it = j.find(std::string(key));
  if (it == j.end()) {
    throw ParseError("missing field \"" + std::string(key) + "\"");
  }
  return *it;
}

std::string RequireString(const Json& j, std::string_view key) {
  const Json& v = RequireField(j, key);
  if (!v.is_string()) {
    throw ParseError("field \"" + std::string(key) + "\" must be a string");
  }
  return v.get<std::string>();
}

int64_t RequireInt(const Json& j, std::string_view key) {
  const Json& v = RequireField(j, key);
  if (!v.is_number_integer()) {
    throw ParseError("field \"" + std::string(key) + "\" must be an integer");
  }
  return v.get<int64_t>();
}

bool RequireBool(const Json& j, std::string_view key) {
  const Json& v = RequireField(j, key);
  if (!v.is_boolean()) {
    throw ParseError("field \"" + std::string(key) + "\" must be a boolean");
  }
  return v.get<bool>();
}

const Json& RequireArray(const Json& j, std::string_view key) {
  const Json& v = RequireField(j, key);
  if (!v.is_array()) {
    throw ParseError("field \"" + std::string(key) + "\" must be an array");
  }
  return v;
}

Json ParseJson(std::string_view text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
}

AttributeRegistry::AttributeRegistry(const MovieKB& kb) {
  for (const auto& [key, a] : kb.gazetteer()) attrs_.emplace(key, a);
}

Attribute AttributeRegistry::Resolve(AttributeKind kind,
                                     const std::string& id) const {
  auto it = attrs_.find({kind, id});
  if (it != attrs_.end()) return it->second;
  return Attribute::WithId(kind, id, id);
}

Json AttributeToJson(const Attribute& a) {
  Json j = Json::object();
  j["kind"] = KindName(a.kind());
  j["id"] = a.id();
  j["display"] = a.display();
  return j;
}

Attribute AttributeFromJson(const Json& j) {
  return Attribute::WithId(RequireKind(j), RequireString(j, "id"),
                           RequireString(j, "display"));
}

Json TrackingToJson(const AttributeTracking& t) {
  Json j = Json::object();
  j["side"] = SideName(t.side());
  j["turn"] = t.turn();
  Json entries = Json::array();
  for (const auto& [a, label] : t.map()) {
    Json e = Json::object();
    e["kind"] = KindName(a.kind());
    e["id"] = a.id();
    e["label"] = LabelName(label);
    entries.push_back(std::move(e));
  }
  j["entries"] = std::move(entries);
  return j;
}

AttributeTracking TrackingFromJson(const Json& j,
                                   const AttributeRegistry& registry) {
  const std::string side_name = RequireString(j, "side");
  auto side = ParseSide(side_name);
  if (!side) throw ParseError("unknown side \"" + side_name + "\"");
  AttributeTracking t(*side, static_cast<int>(RequireInt(j, "turn")));
  for (const Json& e : RequireArray(j, "entries")) {
    const Attribute a = registry.Resolve(RequireKind(e), RequireString(e, "id"));
    if (t.Contains(a)) {
      throw ParseError("tracking lists " + DebugString(a) + " twice");
    }
    t.Set(a, RequireLabel(e));
  }
  return t;
}

Json PlaceholderEntriesToJson(const PlaceholderTracking& t) {
  Json out = Json::array();
  for (const auto& [p, label] : t.entries()) {
    Json e = Json::object();
    e["placeholder"] = p.Render();
    e["label"] = LabelName(label);
    out.push_back(std::move(e));
  }
  return out;
}

PlaceholderTracking PlaceholderEntriesFromJson(const Json& entries, int turn) {
  if (!entries.is_array()) throw ParseError("entries must be an array");
  PlaceholderTracking t(turn);
  for (const Json& e : entries) {
    const std::string text = RequireString(e, "placeholder");
    auto p = Placeholder::Parse(text);
    if (!p) throw ParseError("malformed placeholder \"" + text + "\"");
    t.Set(*p, RequireLabel(e));
  }
  return t;
}

Json DeltaToJson(const AttributeDelta& delta) {
  Json out = Json::array();
  for (const TrackingEntry& e : delta.entries) {
    Json j = AttributeToJson(e.attribute);
    j["label"] = LabelName(e.label);
    out.push_back(std::move(j));
  }
  return out;
}

AttributeDelta DeltaFromJson(const Json& j) {
  if (!j.is_array()) throw ParseError("delta must be an array");
  AttributeDelta delta;
  for (const Json& e : j) {
    delta.entries.push_back({AttributeFromJson(e), RequireLabel(e)});
  }
  return delta;
}

Json PolicyStateToJson(const PolicyState& s) {
  Json j = Json::object();
  j["positive_titles"] = s.positive_titles;
  j["positive_genres"] = s.positive_genres;
  j["positive_persons"] = s.positive_persons;
  j["system_positive_persons"] = s.system_positive_persons;
  j["last_status"] =
      s.last_status ? Json(StatusName(*s.last_status)) : Json(nullptr);
  j["request_alternative"] = s.request_alternative;
  j["reengaged"] = s.reengaged;
  j["closing"] = s.closing;
  return j;
}

PolicyState PolicyStateFromJson(const Json& j) {
  PolicyState s;
  s.positive_titles = static_cast<int>(RequireInt(j, "positive_titles"));
  s.positive_genres = static_cast<int>(RequireInt(j, "positive_genres"));
  s.positive_persons = static_cast<int>(RequireInt(j, "positive_persons"));
  s.system_positive_persons =
      static_cast<int>(RequireInt(j, "system_positive_persons"));
  const Json& status = RequireField(j, "last_status");
  if (!status.is_null()) {
    auto parsed = ParseStatus(status.is_string() ? status.get<std::string>()
                                                 : std::string());
    if (!parsed) throw ParseError("unknown recommendation status");
    s.last_status = parsed;
  }
  s.request_alternative = RequireBool(j, "request_alternative");
  s.reengaged = RequireBool(j, "reengaged");
  s.closing = RequireBool(j, "closing");
  return s;
}

Json QueryToJson(const RecommendationQuery& q, int k) {
  Json j = Json::object();
  j["positives"] = AttributeList(q.positives);
  j["negatives"] = AttributeList(q.negatives);
  j["target_kind"] = KindName(q.target_kind);
  j["exclude"] = AttributeList(q.exclude);
  j["k"] = k;
  return j;
}

std::pair<RecommendationQuery, int> QueryFromJson(const Json& j) {
  RecommendationQuery q;
  q.positives = AttributeSet(j, "positives");
  q.negatives = AttributeSet(j, "negatives");
  const std::string kind = RequireString(j, "target_kind");
  auto parsed = ParseKind(kind);
  if (!parsed) throw ParseError("unknown target_kind \"" + kind + "\"");
  q.target_kind = *parsed;
  q.exclude = AttributeSet(j, "exclude");
  return {std::move(q), static_cast<int>(RequireInt(j, "k"))};
}

Json CandidatesToJson(const std::vector<ScoredCandidate>& candidates) {
  Json list = Json::array();
  for (const ScoredCandidate& c : candidates) {
    Json e = Json::object();
    e["attribute"] = AttributeToJson(c.attribute);
    e["score"] = c.score;
    list.push_back(std::move(e));
  }
  Json j = Json::object();
  j["candidates"] = std::move(list);
  return j;
}

std::vector<ScoredCandidate> CandidatesFromJson(const Json& j) {
  std::vector<ScoredCandidate> out;
  for (const Json& e : RequireArray(j, "candidates")) {
    const Json& score = RequireField(e, "score");
    if (!score.is_number()) throw ParseError("score must be a number");
    out.push_back({AttributeFromJson(RequireField(e, "attribute")),
                   static_cast<int>(std::lround(score.get<double>())),
                   {}});
  }
  return out;
}

}  // namespace attrdial
