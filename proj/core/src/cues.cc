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

#include "attrdial/cues.h"

#include <set>

namespace attrdial {

const CueLexicon& CueLexicon::Default() {
  static const CueLexicon* lexicon = new CueLexicon({
      {CueType::kPreference,
       {"like", "likes", "liked", "love", "loved", "loves", "enjoy", "enjoyed",
        "fan of", "into", "prefer", "favorite", "favourite", "want",
        "in the mood for", "looking for", "recommend a"}},
      {CueType::kAversion,
       {"dont like", "do not like", "didnt like", "did not like", "hate",
        "hated", "dislike", "not a fan", "not a big fan", "not into",
        "not really into", "cant stand", "can not stand", "cannot stand",
        "not a huge fan", "no more"}},
      {CueType::kRejection,
       {"seen it", "seen that", "seen this", "saw it", "saw that",
        "watched it", "watched that", "already seen", "already watched",
        "no thanks", "something else",
        "another movie", "another one", "different movie", "not interested",
        "not that one", "not in that"}},
      {CueType::kAlternative,
       {"something else", "anything else", "another movie", "another one",
        "different movie", "other movie", "other movies", "any other"}},
      {CueType::kAcceptance,
       {"sounds good", "sounds great", "ill watch", "i will watch",
        "thats perfect", "that is perfect", "ill check it out",
        "will check it out", "lets watch", "ill go with"}},
      {CueType::kClosing, {"bye", "goodbye", "good bye", "see you"}},
  });
  return *lexicon;
}

CueLexicon::CueLexicon(
    const std::map<CueType, std::vector<std::string>>& raw) {
  for (const auto& [type, phrases] : raw) {
    auto& list = cues_[type];
    for (const std::string& phrase : phrases) {
      std::vector<std::string> words;
      for (const Token& t : Tokenize(phrase)) words.push_back(t.text);
      if (!words.empty()) list.push_back(std::move(words));
    }
  }
}

bool CueLexicon::Matches(CueType type, const std::vector<Token>& tokens,
                         size_t first, size_t last) const {
  auto it = cues_.find(type);
  if (it == cues_.end()) return false;
  for (const auto& cue : it->second) {
    if (cue.size() > last - first) continue;
    for (size_t i = first; i + cue.size() <= last; ++i) {
      bool hit = true;
      for (size_t k = 0; k < cue.size() && hit; ++k) {
        hit = !tokens[i + k].barrier && tokens[i + k].text == cue[k];
      }
      if (hit) return true;
    }
  }
  return false;
}

bool CueLexicon::InText(CueType type, std::string_view text) const {
  const std::vector<Token> tokens = Tokenize(text);
  return Matches(type, tokens, 0, tokens.size());
}

bool CueLexicon::InClause(CueType type, std::string_view text,
                          size_t pos) const {
  for (const Clause& c : SplitClauses(text)) {
    if (pos >= c.begin && pos < c.end) {
      return InText(type, text.substr(c.begin, c.end - c.begin));
    }
  }
  return false;
}

bool CueLexicon::NegatedAt(std::string_view text, size_t pos) const {
  static const std::set<std::string> kSkip = {"a", "an", "the", "really"};
  static const std::set<std::string> kNegation = {"not", "no", "nor", "never"};
  const std::vector<Token> tokens = Tokenize(text.substr(0, pos));
  for (size_t i = tokens.size(); i > 0; --i) {
    const Token& t = tokens[i - 1];
    if (t.barrier) return false;
    if (kSkip.count(t.text)) continue;
    return kNegation.count(t.text) > 0;
  }
  return false;
}

}  // namespace attrdial
