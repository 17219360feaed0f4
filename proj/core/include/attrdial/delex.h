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
// Delexicalization into indexed typed placeholders and the way back.
//
// Rendering (bit-exact):
//   [MOVIE_k] [GENRE_k] [PERSON_k]          indexed, k >= 0
//   [NEW_MOVIE] [NEW_GENRE] [NEW_PERSON]    an attribute not yet in the dialog

#ifndef ATTRDIAL_DELEX_H_
#define ATTRDIAL_DELEX_H_

#include <compare>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "attrdial/dialog.h"
#include "attrdial/kb.h"
#include "attrdial/recommender.h"
#include "attrdial/tracking.h"

namespace attrdial {

class Placeholder {
 public:
  static Placeholder Indexed(AttributeKind kind, int index);
  static Placeholder New(AttributeKind kind);
  static std::optional<Placeholder> Parse(std::string_view text);

  AttributeKind kind() const { return kind_; }
  int index() const { return index_; }  // -1 for NEW placeholders
  bool is_new() const { return is_new_; }
  std::string Render() const;

  friend bool operator==(const Placeholder&, const Placeholder&) = default;
  // By kind, then indexed before NEW, then index.
  friend std::strong_ordering operator<=>(const Placeholder& a,
                                          const Placeholder& b) {
    if (auto c = a.kind_ <=> b.kind_; c != 0) return c;
    if (auto c = a.is_new_ <=> b.is_new_; c != 0) return c;
    return a.index_ <=> b.index_;
  }

 private:
  Placeholder(AttributeKind kind, int index, bool is_new)
      : kind_(kind), index_(index), is_new_(is_new) {}

  AttributeKind kind_;
  int index_;
  bool is_new_;
};

// Session-scoped bijection between indexed placeholders and attributes.
// Indices per kind are contiguous from 0 in first-seen order and never
// change once assigned.
class PlaceholderMap {
 public:
  // Returns the attribute's placeholder, assigning the next index of its
  // kind if it has none yet.
  Placeholder Assign(const Attribute& attribute);

  std::optional<Placeholder> Find(const Attribute& attribute) const;
  const Attribute* Find(const Placeholder& placeholder) const;

  size_t size() const { return by_attribute_.size(); }
  size_t CountOf(AttributeKind kind) const;

  // (placeholder, attribute) pairs ordered by placeholder.
  std::vector<std::pair<Placeholder, Attribute>> Entries() const;

 private:
  std::map<AttributeKind, std::vector<Attribute>> by_kind_;
  std::map<Attribute, int> by_attribute_;
};

// A tracking expressed over placeholders; the predictor's output space.
class PlaceholderTracking {
 public:
  PlaceholderTracking() = default;
  explicit PlaceholderTracking(int turn) : turn_(turn) {}

  int turn() const { return turn_; }
  void set_turn(int turn) { turn_ = turn; }

  void Set(const Placeholder& p, Label label) { entries_.insert_or_assign(p, label); }
  bool Erase(const Placeholder& p) { return entries_.erase(p) > 0; }
  bool empty() const { return entries_.empty(); }
  size_t size() const { return entries_.size(); }
  const std::map<Placeholder, Label>& entries() const { return entries_; }

  friend bool operator==(const PlaceholderTracking& a,
                         const PlaceholderTracking& b) {
    return a.turn_ == b.turn_ && a.entries_ == b.entries_;
  }

 private:
  int turn_ = 0;
  std::map<Placeholder, Label> entries_;
};

using PredictedTracking = PlaceholderTracking;

// Replaces every mention span with its placeholder rendering, assigning
// placeholders to first-seen attributes. Text outside mentions is copied
// byte for byte. Throws InternalError for spans outside the text.
std::string DelexicalizeText(std::string_view text,
                             std::span<const AttributeMention> mentions,
                             PlaceholderMap& map);

struct DelexResult {
  std::vector<std::string> turn_texts;  // one per input turn
  std::string context;                  // "user: ...\nsystem: ..." lines
  PlaceholderTracking user;
  PlaceholderTracking system;
};

// Delexicalizes the dialog (turns in order, so indices follow first mention
// with both sides interleaved) and then both trackings.
DelexResult Delexicalize(std::span<const Turn> turns,
                         const TurnTrackings& trackings, PlaceholderMap& map);

// "user: text" / "system: text" lines joined with '\n'.
std::string RenderContextLine(Side speaker, std::string_view text);

// Maps predicted placeholders back to attributes. Indexed placeholders go
// through the map; each positive NEW placeholder is filled by the
// recommender with the current positive and negative attributes, restricted
// to the placeholder's kind and excluding everything already in the map.
// Throws NoCandidateError naming the kind when a NEW placeholder cannot be
// filled, and InternalError for an indexed placeholder missing from the map.
AttributeTracking Relexicalize(const PredictedTracking& predicted,
                               const PlaceholderMap& map,
                               const Recommender& recommender,
                               const TurnTrackings& current, int next_turn);

// Like Relexicalize, but drops NEW placeholders that cannot be filled
// instead of throwing. Kinds that failed are appended to unfilled.
AttributeTracking RelexicalizeLenient(const PredictedTracking& predicted,
                                      const PlaceholderMap& map,
                                      const Recommender& recommender,
                                      const TurnTrackings& current,
                                      int next_turn,
                                      std::vector<AttributeKind>* unfilled);

}  // namespace attrdial

#endif  // ATTRDIAL_DELEX_H_
