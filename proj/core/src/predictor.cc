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

#include "attrdial/predictor.h"

#include <algorithm>
#include <map>
#include <set>

#include "attrdial/cues.h"

namespace attrdial {

std::string_view StatusName(RecommendationStatus s) {
  switch (s) {
    case RecommendationStatus::kOffered:
      return "offered";
    case RecommendationStatus::kAccepted:
      return "accepted";
    case RecommendationStatus::kRejected:
      return "rejected";
  }
  return "offered";
}

std::optional<RecommendationStatus> ParseStatus(std::string_view name) {
  for (auto s : {RecommendationStatus::kOffered, RecommendationStatus::kAccepted,
                 RecommendationStatus::kRejected}) {
    if (StatusName(s) == name) return s;
  }
  return std::nullopt;
}

RecommendationRecord* ApplyUserReaction(std::vector<RecommendationRecord>& log,
                                        std::string_view user_text) {
  if (log.empty() || log.back().status != RecommendationStatus::kOffered) {
    return nullptr;
  }
  const CueLexicon& cues = CueLexicon::Default();
  // "Sounds good, but we've seen it" is a rejection.
  if (cues.InText(CueType::kRejection, user_text)) {
    log.back().status = RecommendationStatus::kRejected;
    return &log.back();
  }
  if (cues.InText(CueType::kAcceptance, user_text)) {
    log.back().status = RecommendationStatus::kAccepted;
    return &log.back();
  }
  return nullptr;
}

PolicyState SummarizeState(std::span<const Turn> context,
                           const TurnTrackings& current,
                           std::span<const RecommendationRecord> log) {
  PolicyState state;
  std::map<Attribute, Label> merged;
  for (const AttributeTracking* t : {&current.user, &current.system}) {
    for (const auto& [a, label] : t->map()) {
      auto [it, fresh] = merged.emplace(a, label);
      if (!fresh && label == Label::kNeg) it->second = Label::kNeg;
    }
  }
  for (const auto& [a, label] : merged) {
    if (label != Label::kPos) continue;
    switch (a.kind()) {
      case AttributeKind::kMovieTitle:
        ++state.positive_titles;
        break;
      case AttributeKind::kGenre:
        ++state.positive_genres;
        break;
      case AttributeKind::kPerson:
        ++state.positive_persons;
        break;
    }
  }
  for (const auto& [a, label] : current.system.map()) {
    if (label == Label::kPos && a.kind() == AttributeKind::kPerson) {
      ++state.system_positive_persons;
    }
  }

  const CueLexicon& cues = CueLexicon::Default();
  for (size_t k = context.size(); k > 0; --k) {
    if (context[k - 1].speaker != Side::kUser) continue;
    state.request_alternative =
        cues.InText(CueType::kAlternative, context[k - 1].text);
    state.closing = cues.InText(CueType::kClosing, context[k - 1].text);
    break;
  }

  if (!log.empty()) {
    state.last_status = log.back().status;
    if (*state.last_status == RecommendationStatus::kRejected) {
      // Replay the reaction to find the turn that rejected the offer, then
      // look for a system turn after it.
      std::vector<RecommendationRecord> replay = {log.back()};
      replay.back().status = RecommendationStatus::kOffered;
      size_t rejected_at = context.size();
      for (size_t k = std::max(log.back().turn, 0); k < context.size(); ++k) {
        if (context[k].speaker != Side::kUser) continue;
        if (ApplyUserReaction(replay, context[k].text)) {
          rejected_at = k;
          break;
        }
      }
      for (size_t k = rejected_at + 1; k < context.size(); ++k) {
        if (context[k].speaker == Side::kSystem) state.reengaged = true;
      }
    }
  }
  return state;
}

std::vector<Placeholder> ScanPlaceholders(std::string_view text) {
  std::vector<Placeholder> out;
  std::set<Placeholder> seen;
  size_t pos = 0;
  while ((pos = text.find('[', pos)) != std::string_view::npos) {
    const size_t close = text.find(']', pos);
    if (close == std::string_view::npos) break;
    if (auto p = Placeholder::Parse(text.substr(pos, close - pos + 1))) {
      if (seen.insert(*p).second) out.push_back(*p);
      pos = close + 1;
    } else {
      ++pos;
    }
  }
  return out;
}

PredictorInput BuildPredictorInput(std::span<const Turn> context,
                                   const TurnTrackings& current, int turn,
                                   const PolicyState& state,
                                   PlaceholderMap& map) {
  DelexResult d = Delexicalize(context, current, map);
  PredictorInput input;
  input.turn = turn;
  input.context = std::move(d.context);
  input.state = state;

  std::set<Placeholder> positives;
  for (const PlaceholderTracking* t : {&d.user, &d.system}) {
    for (const auto& [p, label] : t->entries()) {
      if (label == Label::kPos) positives.insert(p);
    }
  }
  // A title rejected on one side is not a positive even if the other side
  // still carries it as pos.
  for (const PlaceholderTracking* t : {&d.user, &d.system}) {
    for (const auto& [p, label] : t->entries()) {
      if (label == Label::kNeg) positives.erase(p);
    }
  }
  for (const Placeholder& p : ScanPlaceholders(input.context)) {
    if (positives.erase(p)) input.positive_placeholders.push_back(p);
  }
  // Positives mentioned before the truncated window come last.
  input.positive_placeholders.insert(input.positive_placeholders.end(),
                                     positives.begin(), positives.end());
  return input;
}

PredictedTracking ReferencePolicy::Predict(const PredictorInput& input) const {
  const PolicyState& s = input.state;
  PredictedTracking out(input.turn + 1);
  auto carry = [&] {
    for (const Placeholder& p : input.positive_placeholders) {
      out.Set(p, Label::kPos);
    }
  };
  auto add_new = [&](AttributeKind kind) {
    out.Set(Placeholder::New(kind), Label::kPos);
  };

  const int positives =
      s.positive_titles + s.positive_genres + s.positive_persons;
  if (positives == 0 || s.closing) return out;
  if (!s.last_status) {
    carry();
    add_new(AttributeKind::kMovieTitle);
    return out;
  }
  switch (*s.last_status) {
    case RecommendationStatus::kAccepted:
      if (s.request_alternative) {
        carry();
        add_new(AttributeKind::kMovieTitle);
      }
      break;
    case RecommendationStatus::kRejected:
      carry();
      if (s.request_alternative || s.reengaged) {
        add_new(AttributeKind::kMovieTitle);
      }
      break;
    case RecommendationStatus::kOffered:
      carry();
      add_new(s.system_positive_persons < 2 ? AttributeKind::kPerson
                                            : AttributeKind::kMovieTitle);
      break;
  }
  return out;
}

PredictedTracking Predict(const PredictorInput& input,
                          const SystemAttributePredictor& predictor) {
  const PredictedTracking raw = predictor.Predict(input);
  std::set<Placeholder> known(input.positive_placeholders.begin(),
                              input.positive_placeholders.end());
  for (const Placeholder& p : ScanPlaceholders(input.context)) known.insert(p);

  PredictedTracking out(input.turn + 1);
  for (const auto& [p, label] : raw.entries()) {
    if (p.is_new() || known.count(p)) {
      out.Set(p, label);
    } else {
      out.Set(Placeholder::New(p.kind()), label);
    }
  }
  return out;
}

bool AttributeDelta::Has(AttributeKind kind, Label label) const {
  return std::any_of(entries.begin(), entries.end(), [&](const TrackingEntry& e) {
    return e.attribute.kind() == kind && e.label == label;
  });
}

std::vector<Attribute> AttributeDelta::Of(AttributeKind kind,
                                          Label label) const {
  std::vector<Attribute> out;
  for (const TrackingEntry& e : entries) {
    if (e.attribute.kind() == kind && e.label == label) {
      out.push_back(e.attribute);
    }
  }
  return out;
}

AttributeDelta ComputeDelta(const AttributeTracking& predicted,
                            const AttributeTracking& current) {
  AttributeDelta delta;
  for (const auto& [a, label] : predicted.map()) {
    if (current.LabelOf(a) != label) delta.entries.push_back({a, label});
  }
  return delta;
}

}  // namespace attrdial
