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

#include "attrdial/tracking.h"

#include "attrdial/cues.h"

namespace attrdial {

std::string_view LabelName(Label label) {
  return label == Label::kPos ? "pos" : "neg";
}

std::optional<Label> ParseLabel(std::string_view name) {
  if (name == "pos") return Label::kPos;
  if (name == "neg") return Label::kNeg;
  return std::nullopt;
}

std::string_view RationaleName(Rationale r) {
  switch (r) {
    case Rationale::kPreferenceCue:
      return "preference_cue";
    case Rationale::kAversionCue:
      return "aversion_cue";
    case Rationale::kRejection:
      return "rejection";
    case Rationale::kDefaultPos:
      return "default_pos";
  }
  return "default_pos";
}

std::optional<Rationale> ParseRationale(std::string_view name) {
  for (Rationale r : {Rationale::kPreferenceCue, Rationale::kAversionCue,
                      Rationale::kRejection, Rationale::kDefaultPos}) {
    if (RationaleName(r) == name) return r;
  }
  return std::nullopt;
}

void AttributeTracking::Set(const Attribute& attribute, Label label) {
  entries_.insert_or_assign(attribute, label);
}

bool AttributeTracking::Erase(const Attribute& attribute) {
  return entries_.erase(attribute) > 0;
}

bool AttributeTracking::Contains(const Attribute& attribute) const {
  return entries_.count(attribute) > 0;
}

std::optional<Label> AttributeTracking::LabelOf(
    const Attribute& attribute) const {
  auto it = entries_.find(attribute);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

std::vector<TrackingEntry> AttributeTracking::Entries() const {
  std::vector<TrackingEntry> out;
  out.reserve(entries_.size());
  for (const auto& [a, l] : entries_) out.push_back({a, l});
  return out;
}

std::set<Attribute> AttributeTracking::Attributes() const {
  std::set<Attribute> out;
  for (const auto& [a, l] : entries_) out.insert(a);
  return out;
}

std::set<Attribute> AttributeTracking::WithLabel(Label label) const {
  std::set<Attribute> out;
  for (const auto& [a, l] : entries_) {
    if (l == label) out.insert(a);
  }
  return out;
}

LabelerDecision ReferenceLabeler::Decide(std::span<const Turn> context,
                                         const Attribute& attribute) const {
  const CueLexicon& cues = CueLexicon::Default();
  const bool is_title = attribute.kind() == AttributeKind::kMovieTitle;
  std::optional<LabelerDecision> latest;
  auto cue = [&](Label label, Rationale why) {
    latest = LabelerDecision{attribute, label, why};
  };

  for (size_t k = 0; k < context.size(); ++k) {
    const Turn& turn = context[k];
    for (const AttributeMention& m : turn.mentions) {
      if (m.attribute != attribute) continue;
      if (turn.speaker == Side::kUser) {
        const std::string_view text = turn.text;
        if (cues.InClause(CueType::kAversion, text, m.begin) ||
            cues.NegatedAt(text, m.begin)) {
          cue(Label::kNeg, Rationale::kAversionCue);
        } else if (is_title &&
                   cues.InClause(CueType::kRejection, text, m.begin)) {
          cue(Label::kNeg, Rationale::kRejection);
        } else if (cues.InClause(CueType::kPreference, text, m.begin)) {
          cue(Label::kPos, Rationale::kPreferenceCue);
        }
      } else if (is_title && k + 1 < context.size() &&
                 context[k + 1].speaker == Side::kUser) {
        // A title the system brought up is judged by the user's reaction.
        const std::string_view reply = context[k + 1].text;
        if (cues.InText(CueType::kRejection, reply)) {
          cue(Label::kNeg, Rationale::kRejection);
        } else if (cues.InText(CueType::kAcceptance, reply)) {
          cue(Label::kPos, Rationale::kPreferenceCue);
        }
      }
    }
  }
  if (latest) return *latest;
  return LabelerDecision{attribute, Label::kPos, Rationale::kDefaultPos};
}

TrackResult Track(std::span<const Turn> context, int turn_index,
                  const std::set<Attribute>& e_user,
                  const std::set<Attribute>& e_system,
                  const AttributeLabeler& labeler) {
  TrackResult result;
  result.trackings.user = AttributeTracking(Side::kUser, turn_index);
  result.trackings.system = AttributeTracking(Side::kSystem, turn_index);

  std::set<Attribute> all = e_user;
  all.insert(e_system.begin(), e_system.end());
  for (const Attribute& a : all) {
    LabelerDecision d;
    try {
      d = labeler.Decide(context, a);
    } catch (const LabelerError&) {
      throw;
    } catch (const std::exception& e) {
      throw LabelerError(a, e.what());
    }
    if (d.attribute != a) {
      throw LabelerError(a, "decision names " + DebugString(d.attribute));
    }
    if (e_user.count(a)) result.trackings.user.Set(a, d.label);
    if (e_system.count(a)) result.trackings.system.Set(a, d.label);
    result.decisions.push_back(std::move(d));
  }
  return result;
}

bool LabelFlipOnRejection(std::vector<TurnTrackings>& trackings,
                          const Attribute& rejected, int from_turn) {
  bool tracked = false;
  for (size_t i = from_turn > 0 ? from_turn - 1 : 0; i < trackings.size();
       ++i) {
    tracked = tracked || trackings[i].user.Contains(rejected) ||
              trackings[i].system.Contains(rejected);
  }
  if (!tracked) return false;
  for (size_t i = from_turn > 0 ? from_turn - 1 : 0; i < trackings.size();
       ++i) {
    for (AttributeTracking* t : {&trackings[i].user, &trackings[i].system}) {
      if (t->Contains(rejected)) t->Set(rejected, Label::kNeg);
    }
  }
  return true;
}

}  // namespace attrdial
