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

#include "attrdial/delex.h"

#include <algorithm>

#include "attrdial/errors.h"

namespace attrdial {
namespace {

std::string_view PlaceholderKindName(AttributeKind kind) {
  switch (kind) {
    case AttributeKind::kMovieTitle:
      return "MOVIE";
    case AttributeKind::kGenre:
      return "GENRE";
    case AttributeKind::kPerson:
      return "PERSON";
  }
  return "MOVIE";
}

std::optional<AttributeKind> ParsePlaceholderKind(std::string_view name) {
  for (AttributeKind k : kAllKinds) {
    if (PlaceholderKindName(k) == name) return k;
  }
  return std::nullopt;
}

}  // namespace

Placeholder Placeholder::Indexed(AttributeKind kind, int index) {
  if (index < 0) throw InternalError("negative placeholder index");
  return Placeholder(kind, index, false);
}

Placeholder Placeholder::New(AttributeKind kind) {
  return Placeholder(kind, -1, true);
}

std::optional<Placeholder> Placeholder::Parse(std::string_view text) {
  if (text.size() < 3 || text.front() != '[' || text.back() != ']') {
    return std::nullopt;
  }
  std::string_view body = text.substr(1, text.size() - 2);
  if (body.starts_with("NEW_")) {
    if (auto kind = ParsePlaceholderKind(body.substr(4))) return New(*kind);
    return std::nullopt;
  }
  const size_t underscore = body.rfind('_');
  if (underscore == std::string_view::npos) return std::nullopt;
  auto kind = ParsePlaceholderKind(body.substr(0, underscore));
  std::string_view digits = body.substr(underscore + 1);
  if (!kind || digits.empty() || digits.size() > 9 ||
      !std::all_of(digits.begin(), digits.end(),
                   [](char c) { return c >= '0' && c <= '9'; })) {
    return std::nullopt;
  }
  // Leading zeros would break the rendering bijection.
  if (digits.size() > 1 && digits.front() == '0') return std::nullopt;
  return Indexed(*kind, std::stoi(std::string(digits)));
}

std::string Placeholder::Render() const {
  std::string out = "[";
  if (is_new_) {
    out += "NEW_";
    out += PlaceholderKindName(kind_);
  } else {
    out += PlaceholderKindName(kind_);
    out += "_" + std::to_string(index_);
  }
  out += "]";
  return out;
}

Placeholder PlaceholderMap::Assign(const Attribute& attribute) {
  if (auto found = Find(attribute)) return *found;
  auto& list = by_kind_[attribute.kind()];
  const int index = static_cast<int>(list.size());
  list.push_back(attribute);
  by_attribute_.emplace(attribute, index);
  return Placeholder::Indexed(attribute.kind(), index);
}

std::optional<Placeholder> PlaceholderMap::Find(
    const Attribute& attribute) const {
  auto it = by_attribute_.find(attribute);
  if (it == by_attribute_.end()) return std::nullopt;
  return Placeholder::Indexed(attribute.kind(), it->second);
}

const Attribute* PlaceholderMap::Find(const Placeholder& placeholder) const {
  if (placeholder.is_new()) return nullptr;
  auto it = by_kind_.find(placeholder.kind());
  if (it == by_kind_.end() ||
      placeholder.index() >= static_cast<int>(it->second.size())) {
    return nullptr;
  }
  return &it->second[placeholder.index()];
}

size_t PlaceholderMap::CountOf(AttributeKind kind) const {
  auto it = by_kind_.find(kind);
  return it == by_kind_.end() ? 0 : it->second.size();
}

std::vector<std::pair<Placeholder, Attribute>> PlaceholderMap::Entries() const {
  std::vector<std::pair<Placeholder, Attribute>> out;
  for (const auto& [kind, list] : by_kind_) {
    for (size_t i = 0; i < list.size(); ++i) {
      out.emplace_back(Placeholder::Indexed(kind, static_cast<int>(i)),
                       list[i]);
    }
  }
  return out;
}

std::string DelexicalizeText(std::string_view text,
                             std::span<const AttributeMention> mentions,
                             PlaceholderMap& map) {
  std::string out;
  size_t cursor = 0;
  for (const AttributeMention& m : mentions) {
    if (m.begin < cursor || m.end <= m.begin || m.end > text.size()) {
      throw InternalError("mention span [" + std::to_string(m.begin) + ", " +
                          std::to_string(m.end) + ") is outside the text or "
                          "overlaps the previous mention");
    }
    out.append(text.substr(cursor, m.begin - cursor));
    out += map.Assign(m.attribute).Render();
    cursor = m.end;
  }
  out.append(text.substr(cursor));
  return out;
}

std::string RenderContextLine(Side speaker, std::string_view text) {
  std::string line(SideName(speaker));
  line += ": ";
  line += text;
  return line;
}

DelexResult Delexicalize(std::span<const Turn> turns,
                         const TurnTrackings& trackings, PlaceholderMap& map) {
  DelexResult result;
  for (const Turn& turn : turns) {
    result.turn_texts.push_back(DelexicalizeText(turn.text, turn.mentions, map));
    if (!result.context.empty()) result.context += '\n';
    result.context += RenderContextLine(turn.speaker, result.turn_texts.back());
  }
  auto convert = [&map](const AttributeTracking& t) {
    PlaceholderTracking out(t.turn());
    for (const auto& [a, label] : t.map()) out.Set(map.Assign(a), label);
    return out;
  };
  result.user = convert(trackings.user);
  result.system = convert(trackings.system);
  return result;
}

namespace {

AttributeTracking RelexicalizeImpl(const PredictedTracking& predicted,
                                   const PlaceholderMap& map,
                                   const Recommender& recommender,
                                   const TurnTrackings& current, int next_turn,
                                   std::vector<AttributeKind>* unfilled) {
  AttributeTracking out(Side::kSystem, next_turn);

  RecommendationQuery base;
  for (const AttributeTracking* t : {&current.user, &current.system}) {
    for (const auto& [a, label] : t->map()) {
      (label == Label::kPos ? base.positives : base.negatives).insert(a);
    }
  }
  for (const Attribute& n : base.negatives) base.positives.erase(n);

  std::set<Attribute> filled;
  for (const auto& [placeholder, label] : predicted.entries()) {
    if (!placeholder.is_new()) {
      const Attribute* a = map.Find(placeholder);
      if (!a) {
        throw InternalError("placeholder " + placeholder.Render() +
                            " is not in the session map");
      }
      out.Set(*a, label);
      continue;
    }
    if (label != Label::kPos) continue;
    RecommendationQuery query = base;
    query.target_kind = placeholder.kind();
    for (const auto& [p, a] : map.Entries()) {
      if (p.kind() == placeholder.kind()) query.exclude.insert(a);
    }
    query.exclude.insert(filled.begin(), filled.end());
    std::vector<ScoredCandidate> found = recommender.Recommend(query, 1);
    // Remote backends may ignore the exclusion contract; re-check it.
    std::erase_if(found, [&query](const ScoredCandidate& c) {
      return query.exclude.count(c.attribute) > 0 ||
             c.attribute.kind() != query.target_kind;
    });
    if (found.empty()) {
      if (unfilled) {
        unfilled->push_back(placeholder.kind());
        continue;
      }
      throw NoCandidateError("no " + std::string(KindName(placeholder.kind())) +
                             " candidate for " + placeholder.Render());
    }
    filled.insert(found.front().attribute);
    out.Set(found.front().attribute, Label::kPos);
  }
  return out;
}

}  // namespace

AttributeTracking Relexicalize(const PredictedTracking& predicted,
                               const PlaceholderMap& map,
                               const Recommender& recommender,
                               const TurnTrackings& current, int next_turn) {
  return RelexicalizeImpl(predicted, map, recommender, current, next_turn,
                          nullptr);
}

AttributeTracking RelexicalizeLenient(const PredictedTracking& predicted,
                                      const PlaceholderMap& map,
                                      const Recommender& recommender,
                                      const TurnTrackings& current,
                                      int next_turn,
                                      std::vector<AttributeKind>* unfilled) {
  std::vector<AttributeKind> scratch;
  return RelexicalizeImpl(predicted, map, recommender, current, next_turn,
                          unfilled ? unfilled : &scratch);
}

}  // namespace attrdial
