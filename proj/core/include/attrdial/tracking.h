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
// Per-turn, per-side attribute trackings with pos/neg labels, and the
// pluggable labeler that assigns those labels.

#ifndef ATTRDIAL_TRACKING_H_
#define ATTRDIAL_TRACKING_H_

#include <map>
#include <optional>
#include <set>
#include <span>
#include <string_view>
#include <vector>

#include "attrdial/dialog.h"
#include "attrdial/errors.h"
#include "attrdial/kb.h"

namespace attrdial {

enum class Label { kPos, kNeg };

std::string_view LabelName(Label label);
std::optional<Label> ParseLabel(std::string_view name);

struct TrackingEntry {
  Attribute attribute;
  Label label = Label::kPos;

  friend bool operator==(const TrackingEntry&, const TrackingEntry&) = default;
};

// The set of (attribute, label) entries one side carries at one turn. At
// most one entry per attribute; several attributes may share a kind.
class AttributeTracking {
 public:
  AttributeTracking() = default;
  AttributeTracking(Side side, int turn) : side_(side), turn_(turn) {}

  Side side() const { return side_; }
  int turn() const { return turn_; }
  void set_turn(int turn) { turn_ = turn; }

  // Inserts or relabels.
  void Set(const Attribute& attribute, Label label);
  bool Erase(const Attribute& attribute);

  bool Contains(const Attribute& attribute) const;
  std::optional<Label> LabelOf(const Attribute& attribute) const;
  bool empty() const { return entries_.empty(); }
  size_t size() const { return entries_.size(); }

  // Ordered by attribute.
  std::vector<TrackingEntry> Entries() const;
  std::set<Attribute> Attributes() const;
  std::set<Attribute> WithLabel(Label label) const;

  const std::map<Attribute, Label>& map() const { return entries_; }

  friend bool operator==(const AttributeTracking& a,
                         const AttributeTracking& b) {
    return a.side_ == b.side_ && a.turn_ == b.turn_ && a.entries_ == b.entries_;
  }

 private:
  Side side_ = Side::kUser;
  int turn_ = 0;
  std::map<Attribute, Label> entries_;
};

struct TurnTrackings {
  AttributeTracking user;
  AttributeTracking system;
};

enum class Rationale { kPreferenceCue, kAversionCue, kRejection, kDefaultPos };

std::string_view RationaleName(Rationale r);
std::optional<Rationale> ParseRationale(std::string_view name);

struct LabelerDecision {
  Attribute attribute;
  Label label = Label::kPos;
  Rationale rationale = Rationale::kDefaultPos;
};

// Decides one attribute's label from the dialog context. Implementations
// must be safe to call concurrently.
class AttributeLabeler {
 public:
  virtual ~AttributeLabeler() = default;
  virtual LabelerDecision Decide(std::span<const Turn> context,
                                 const Attribute& attribute) const = 0;
};

// Rule-based labeler. Walks every mention of the attribute in order; the
// latest cue wins:
//  - user clause with an aversion cue, or a negation right before the
//    mention -> neg (aversion)
//  - user clause rejecting a title ("seen it") -> neg (rejection)
//  - a title the system mentioned, followed by a user turn with a rejection
//    cue -> neg (rejection); with an acceptance cue -> pos
//  - user clause with a preference cue -> pos (preference)
// With no cue at all the label defaults to pos.
class ReferenceLabeler : public AttributeLabeler {
 public:
  LabelerDecision Decide(std::span<const Turn> context,
                         const Attribute& attribute) const override;
};

// Raised when a labeler fails; carries the attribute it failed on.
class LabelerError : public BackendError {
 public:
  LabelerError(const Attribute& attribute, const std::string& what)
      : BackendError("labeler failed on " + DebugString(attribute) + ": " +
                     what),
        attribute_(attribute) {}
  const Attribute& attribute() const { return attribute_; }

 private:
  Attribute attribute_;
};

struct TrackResult {
  TurnTrackings trackings;
  std::vector<LabelerDecision> decisions;  // one per distinct attribute
};

// Labels every attribute of e_user and e_system against the context. The
// context is the dialog through the current turn; turn_index is that turn's
// 1-based index. All-or-nothing: a labeler failure throws LabelerError.
TrackResult Track(std::span<const Turn> context, int turn_index,
                  const std::set<Attribute>& e_user,
                  const std::set<Attribute>& e_system,
                  const AttributeLabeler& labeler);

// Marks the rejected title neg in every tracking from from_turn on (1-based,
// inclusive). Returns false and changes nothing when the title was never
// tracked at or after from_turn.
bool LabelFlipOnRejection(std::vector<TurnTrackings>& trackings,
                          const Attribute& rejected, int from_turn);

}  // namespace attrdial

#endif  // ATTRDIAL_TRACKING_H_
