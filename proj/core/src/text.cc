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

#include "attrdial/text.h"

#include <algorithm>
#include <array>
#include <set>

namespace attrdial {
namespace {

bool IsAsciiWord(unsigned char c) {
  return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') ||
         (c >= 'A' && c <= 'Z');
}

// Length of the UTF-8 sequence starting with lead byte c (1 for malformed).
size_t SequenceLength(unsigned char c) {
  if (c < 0x80) return 1;
  if ((c & 0xE0) == 0xC0) return 2;
  if ((c & 0xF0) == 0xE0) return 3;
  if ((c & 0xF8) == 0xF0) return 4;
  return 1;
}

enum class CharClass { kWord, kApostrophe, kSeparator };

// Classifies the code point at text[pos]; len receives its byte length.
CharClass Classify(std::string_view text, size_t pos, size_t* len) {
  const auto c = static_cast<unsigned char>(text[pos]);
  *len = std::min(SequenceLength(c), text.size() - pos);
  if (c < 0x80) {
    if (IsAsciiWord(c)) return CharClass::kWord;
    if (c == '\'') return CharClass::kApostrophe;
    return CharClass::kSeparator;
  }
  // U+2000..U+206F general punctuation: E2 80 xx / E2 81 xx.
  if (*len == 3 && c == 0xE2) {
    const auto c1 = static_cast<unsigned char>(text[pos + 1]);
    const auto c2 = static_cast<unsigned char>(text[pos + 2]);
    if (c1 == 0x80 && c2 == 0x99) return CharClass::kApostrophe;  // U+2019
    if (c1 == 0x80 || c1 == 0x81) return CharClass::kSeparator;
  }
  // U+00A0..U+00BF Latin-1 punctuation and symbols, U+00D7, U+00F7.
  if (*len == 2 && c == 0xC2) return CharClass::kSeparator;
  if (*len == 2 && c == 0xC3) {
    const auto c1 = static_cast<unsigned char>(text[pos + 1]);
    if (c1 == 0x97 || c1 == 0xB7) return CharClass::kSeparator;
  }
  return CharClass::kWord;
}

constexpr std::array<std::string_view, 3> kKindNames = {"MOVIE", "GENRE",
                                                         "PERSON"};

// Returns the length of a placeholder starting at text[pos], or 0.
size_t PlaceholderLength(std::string_view text, size_t pos) {
  if (text[pos] != '[') return 0;
  std::string_view rest = text.substr(pos + 1);
  if (rest.starts_with("NEW_")) {
    for (std::string_view kind : kKindNames) {
      if (rest.substr(4).starts_with(kind) &&
          rest.size() > 4 + kind.size() && rest[4 + kind.size()] == ']') {
        return 1 + 4 + kind.size() + 1;
      }
    }
    return 0;
  }
  for (std::string_view kind : kKindNames) {
    if (!rest.starts_with(kind) || rest.size() <= kind.size() ||
        rest[kind.size()] != '_') {
      continue;
    }
    size_t i = kind.size() + 1;
    const size_t digits_begin = i;
    while (i < rest.size() && rest[i] >= '0' && rest[i] <= '9') ++i;
    if (i > digits_begin && i < rest.size() && rest[i] == ']') return 1 + i + 1;
  }
  return 0;
}

}  // namespace

std::string CaseFold(std::string_view text) {
  std::string out(text);
  for (size_t i = 0; i < out.size(); ++i) {
    auto c = static_cast<unsigned char>(out[i]);
    if (c >= 'A' && c <= 'Z') {
      out[i] = static_cast<char>(c + ('a' - 'A'));
    } else if (c == 0xC3 && i + 1 < out.size()) {
      auto c1 = static_cast<unsigned char>(out[i + 1]);
      // U+00C0..U+00DE map to U+00E0..U+00FE, except U+00D7.
      if (c1 >= 0x80 && c1 <= 0x9E && c1 != 0x97) {
        out[i + 1] = static_cast<char>(c1 + 0x20);
      }
      ++i;
    }
  }
  return out;
}

std::vector<Token> Tokenize(std::string_view text) {
  std::vector<Token> tokens;
  Token current;
  bool in_word = false;
  size_t pending_apostrophe = 0;  // byte length of a held apostrophe

  auto flush = [&] {
    if (in_word) {
      current.text = CaseFold(current.text);
      tokens.push_back(std::move(current));
      current = Token{};
    }
    in_word = false;
    pending_apostrophe = 0;
  };

  size_t pos = 0;
  while (pos < text.size()) {
    if (size_t ph = PlaceholderLength(text, pos); ph > 0) {
      flush();
      tokens.push_back(Token{std::string(text.substr(pos, ph)), pos, pos + ph,
                             /*barrier=*/true});
      pos += ph;
      continue;
    }
    size_t len = 1;
    const CharClass cls = Classify(text, pos, &len);
    switch (cls) {
      case CharClass::kWord:
        if (!in_word) {
          in_word = true;
          current.begin = pos;
        }
        pending_apostrophe = 0;
        current.text.append(text.substr(pos, len));
        current.end = pos + len;
        break;
      case CharClass::kApostrophe:
        if (in_word && pending_apostrophe == 0) {
          pending_apostrophe = len;
        } else {
          flush();
        }
        break;
      case CharClass::kSeparator:
        flush();
        break;
    }
    pos += len;
  }
  flush();
  return tokens;
}

std::string JoinTokens(const std::vector<Token>& tokens, size_t first,
                       size_t last) {
  std::string out;
  for (size_t i = first; i < last; ++i) {
    if (i > first) out.push_back(' ');
    out += tokens[i].text;
  }
  return out;
}

std::string Canonicalize(std::string_view text, bool strip_article) {
  std::vector<Token> tokens = Tokenize(text);
  size_t first = 0;
  if (strip_article && tokens.size() > 1) {
    const std::string& head = tokens[0].text;
    if (head == "the" || head == "a" || head == "an") first = 1;
  }
  return JoinTokens(tokens, first, tokens.size());
}

size_t CountWords(std::string_view text) {
  size_t count = 0;
  bool in_word = false;
  for (char c : text) {
    const bool space = c == ' ' || c == '\t' || c == '\n' || c == '\r' ||
                       c == '\f' || c == '\v';
    if (!space && !in_word) ++count;
    in_word = !space;
  }
  return count;
}

std::vector<Clause> SplitClauses(std::string_view text) {
  static const std::set<std::string> kConjunctions = {
      "but", "although", "though", "however", "whereas", "except"};
  std::set<size_t> cuts;
  for (size_t i = 0; i < text.size(); ++i) {
    switch (text[i]) {
      case '.':
      case ',':
      case ';':
      case '!':
      case '?':
        cuts.insert(i + 1);
        break;
      default:
        break;
    }
  }
  for (const Token& t : Tokenize(text)) {
    if (!t.barrier && kConjunctions.count(t.text)) cuts.insert(t.begin);
  }
  cuts.insert(text.size());
  std::vector<Clause> clauses;
  size_t begin = 0;
  for (size_t cut : cuts) {
    if (cut > begin) clauses.push_back({begin, cut});
    begin = cut;
  }
  return clauses;
}

}  // namespace attrdial
