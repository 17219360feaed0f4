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

#include "attrdial/extract.h"

#include <algorithm>
#include <fstream>
#include <functional>
#include <istream>

#include <nlohmann/json.hpp>

#include "attrdial/errors.h"
#include "attrdial/text.h"

namespace attrdial {

std::string_view SideName(Side side) {
  return side == Side::kUser ? "user" : "system";
}

std::optional<Side> ParseSide(std::string_view name) {
  if (name == "user") return Side::kUser;
  if (name == "system") return Side::kSystem;
  return std::nullopt;
}

GenrePatternSet GenrePatternSet::Load(std::istream& in) {
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("genre patterns: ") + e.what());
  }
  if (!j.is_object()) throw ParseError("genre patterns must be a JSON object");
  std::map<std::string, std::string> m;
  for (const auto& item : j.items()) {
    if (!item.value().is_string()) {
      throw ParseError("genre pattern \"" + item.key() +
                       "\" must map to a string");
    }
    m[item.key()] = item.value().get<std::string>();
  }
  return FromMap(m);
}

GenrePatternSet GenrePatternSet::LoadFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open genre pattern file " + path);
  return Load(in);
}

GenrePatternSet GenrePatternSet::FromMap(
    const std::map<std::string, std::string>& m) {
  GenrePatternSet set;
  for (const auto& [alias, genre] : m) {
    std::string key = Canonicalize(alias);
    std::string id = CanonicalId(AttributeKind::kGenre, genre);
    if (key.empty() || id.empty()) {
      throw ValidationError("empty genre pattern entry \"" + alias + "\"");
    }
    set.aliases_[key] = id;
  }
  return set;
}

MentionExtractor::MentionExtractor(const MovieKB& kb,
                                   const GenrePatternSet& patterns)
    : kb_(&kb) {
  auto note_length = [this](const std::string& key, size_t extra) {
    size_t n = key.empty() ? 0 : 1 + std::count(key.begin(), key.end(), ' ');
    max_tokens_ = std::max(max_tokens_, n + extra);
  };
  for (const auto& [key, a] : kb.gazetteer()) {
    switch (a.kind()) {
      case AttributeKind::kMovieTitle:
        titles_.emplace(a.id(), a);
        note_length(a.id(), 1);  // room for a leading "the"
        break;
      case AttributeKind::kPerson:
        persons_.emplace(a.id(), a);
        note_length(a.id(), 0);
        break;
      case AttributeKind::kGenre:
        genres_.emplace(a.id(), a);
        note_length(a.id(), 0);
        break;
    }
  }
  for (const auto& [alias, id] : patterns.aliases()) {
    const Attribute* known = kb.Find(AttributeKind::kGenre, id);
    Attribute genre =
        known ? *known : Attribute::WithId(AttributeKind::kGenre, id, id);
    genres_.insert_or_assign(alias, genre);
    note_length(alias, 0);
  }
}

const Attribute* MentionExtractor::Lookup(AttributeKind kind,
                                          const std::string& key) const {
  const auto& table = kind == AttributeKind::kMovieTitle ? titles_
                      : kind == AttributeKind::kPerson   ? persons_
                                                         : genres_;
  auto it = table.find(key);
  return it == table.end() ? nullptr : &it->second;
}

namespace {

// Finds the best attribute for tokens [first, first + len).
const Attribute* MatchSequence(
    const std::vector<Token>& tokens, size_t first, size_t len,
    const std::function<const Attribute*(AttributeKind, const std::string&)>&
        lookup) {
  const std::string key = JoinTokens(tokens, first, first + len);
  if (len > 1 && tokens[first].text == "the") {
    if (const Attribute* a = lookup(AttributeKind::kMovieTitle,
                                    JoinTokens(tokens, first + 1, first + len))) {
      return a;
    }
  }
  for (AttributeKind kind : {AttributeKind::kMovieTitle, AttributeKind::kPerson,
                             AttributeKind::kGenre}) {
    if (const Attribute* a = lookup(kind, key)) return a;
  }
  return nullptr;
}

}  // namespace

std::vector<AttributeMention> MentionExtractor::Extract(std::string_view text,
                                                        Side side) const {
  const std::vector<Token> tokens = Tokenize(text);
  auto lookup = [this](AttributeKind kind, const std::string& key) {
    return Lookup(kind, key);
  };
  std::vector<AttributeMention> mentions;
  size_t i = 0;
  while (i < tokens.size()) {
    if (tokens[i].barrier) {
      ++i;
      continue;
    }
    size_t run = 0;
    while (i + run < tokens.size() && !tokens[i + run].barrier &&
           run < max_tokens_) {
      ++run;
    }
    size_t matched_len = 0;
    const Attribute* match = nullptr;
    for (size_t len = run; len >= 1 && !match; --len) {
      match = MatchSequence(tokens, i, len, lookup);
      if (match) matched_len = len;
    }
    if (!match) {
      ++i;
      continue;
    }
    mentions.push_back(AttributeMention{
        *match, tokens[i].begin, tokens[i + matched_len - 1].end, side});
    i += matched_len;
  }
  return mentions;
}

std::optional<Attribute> MentionExtractor::Resolve(
    std::string_view surface) const {
  const std::vector<Token> tokens = Tokenize(surface);
  if (tokens.empty()) return std::nullopt;
  for (const Token& t : tokens) {
    if (t.barrier) return std::nullopt;
  }
  auto lookup = [this](AttributeKind kind, const std::string& key) {
    return Lookup(kind, key);
  };
  if (const Attribute* a = MatchSequence(tokens, 0, tokens.size(), lookup)) {
    return *a;
  }
  return std::nullopt;
}

std::vector<AttributeMention> ExtractMentions(std::string_view text,
                                              const MovieKB& kb,
                                              const GenrePatternSet& patterns,
                                              Side side) {
  return MentionExtractor(kb, patterns).Extract(text, side);
}

std::set<Attribute> CollectSideAttributes(std::span<const Turn> turns,
                                          Side side) {
  std::set<Attribute> out;
  for (const Turn& turn : turns) {
    if (turn.speaker != side) continue;
    for (const AttributeMention& m : turn.mentions) out.insert(m.attribute);
  }
  return out;
}

}  // namespace attrdial
