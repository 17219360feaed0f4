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
// Lexical cue phrases used by the reference labeler and by the engine's
// recommendation bookkeeping. Cues are token sequences matched on the same
// case-folded tokens as attribute mentions, so "Don't like" and "dont like"
// are the same cue.

#ifndef ATTRDIAL_CUES_H_
#define ATTRDIAL_CUES_H_

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "attrdial/text.h"

namespace attrdial {

enum class CueType {
  kPreference,   // "like", "love", "fan of"
  kAversion,     // "hate", "don't like", "not a fan"
  kRejection,    // "seen it", "no thanks", "something else"
  kAlternative,  // "something else", "another one", "any other"
  kAcceptance,   // "sounds good", "I'll watch"
  kClosing,      // "bye", "goodbye"
};

class CueLexicon {
 public:
  static const CueLexicon& Default();

  // Builds a lexicon from raw phrases; phrases are tokenized here.
  explicit CueLexicon(const std::map<CueType, std::vector<std::string>>& raw);

  // True iff a cue of the type occurs inside tokens [first, last).
  bool Matches(CueType type, const std::vector<Token>& tokens, size_t first,
               size_t last) const;

  // Anywhere in the utterance.
  bool InText(CueType type, std::string_view text) const;

  // Inside the clause of text that contains byte offset pos.
  bool InClause(CueType type, std::string_view text, size_t pos) const;

  // True iff the word right before byte offset pos (skipping "a", "an",
  // "the", "really") is a negation such as "not" or "no".
  bool NegatedAt(std::string_view text, size_t pos) const;

 private:
  std::map<CueType, std::vector<std::vector<std::string>>> cues_;
};

}  // namespace attrdial

#endif  // ATTRDIAL_CUES_H_
