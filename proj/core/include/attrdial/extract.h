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
// Gazetteer and alias based attribute mention extraction.

#ifndef ATTRDIAL_EXTRACT_H_
#define ATTRDIAL_EXTRACT_H_

#include <iosfwd>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "attrdial/dialog.h"
#include "attrdial/kb.h"

namespace attrdial {

// Alias -> canonical genre id table, e.g. "cartoons" -> "animation".
class GenrePatternSet {
 public:
  GenrePatternSet() = default;

  // Reads a JSON object mapping alias strings to genre names.
  static GenrePatternSet Load(std::istream& in);
  static GenrePatternSet LoadFile(const std::string& path);
  static GenrePatternSet FromMap(const std::map<std::string, std::string>& m);

  // Canonical alias -> canonical genre id.
  const std::map<std::string, std::string>& aliases() const { return aliases_; }

 private:
  std::map<std::string, std::string> aliases_;
};

// Leftmost-longest matcher over titles, persons and genre patterns.
// Construction indexes the KB once; Extract is const and thread-safe.
class MentionExtractor {
 public:
  MentionExtractor(const MovieKB& kb, const GenrePatternSet& patterns);

  // Non-overlapping mentions ordered by span start. At each position the
  // longest token sequence wins; equal lengths prefer title, then person,
  // then genre.
  std::vector<AttributeMention> Extract(std::string_view text,
                                        Side side = Side::kUser) const;

  // Resolves a surface string (title, person or genre alias) the same way
  // Extract would if it were the whole utterance. Empty when nothing
  // matches the complete string.
  std::optional<Attribute> Resolve(std::string_view surface) const;

  const MovieKB& kb() const { return *kb_; }

 private:
  const Attribute* Lookup(AttributeKind kind, const std::string& key) const;

  const MovieKB* kb_;
  std::unordered_map<std::string, Attribute> titles_;
  std::unordered_map<std::string, Attribute> persons_;
  std::unordered_map<std::string, Attribute> genres_;
  size_t max_tokens_ = 1;
};

std::vector<AttributeMention> ExtractMentions(std::string_view text,
                                              const MovieKB& kb,
                                              const GenrePatternSet& patterns,
                                              Side side = Side::kUser);

// Union of the attributes one side mentions across the given turns.
std::set<Attribute> CollectSideAttributes(std::span<const Turn> turns,
                                          Side side);

}  // namespace attrdial

#endif  // ATTRDIAL_EXTRACT_H_
