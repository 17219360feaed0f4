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
// Word tokenization and canonical forms shared by the knowledge base, the
// mention extractor and the cue lexicon. Every canonical string in the
// library is produced by the same tokenizer, so surface text and stored ids
// agree by construction.

#ifndef ATTRDIAL_TEXT_H_
#define ATTRDIAL_TEXT_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace attrdial {

struct Token {
  std::string text;   // case-folded, apostrophes removed
  size_t begin = 0;   // byte offset into the source
  size_t end = 0;     // one past the last byte
  // Placeholders such as "[MOVIE_0]" are kept as opaque barrier tokens:
  // they never match anything and no match may span across them.
  bool barrier = false;
};

// Splits UTF-8 text into word tokens. Word characters are ASCII letters,
// digits and any non-ASCII code point outside the general punctuation block.
// An apostrophe between two word characters is dropped and the halves join.
std::vector<Token> Tokenize(std::string_view text);

// Lowercases ASCII and the Latin-1 uppercase letters; other bytes pass
// through unchanged.
std::string CaseFold(std::string_view text);

// Canonical form: tokens joined by one space. With strip_article, a leading
// "the", "a" or "an" is dropped as long as another token remains.
std::string Canonicalize(std::string_view text, bool strip_article = false);

// Joins tokens [first, last) with single spaces.
std::string JoinTokens(const std::vector<Token>& tokens, size_t first,
                       size_t last);

// Number of whitespace-separated words; the token budget unit for context
// truncation.
size_t CountWords(std::string_view text);

// Half-open byte ranges of the clauses of an utterance. Clauses end at
// sentence punctuation, commas, semicolons and contrastive conjunctions.
struct Clause {
  size_t begin = 0;
  size_t end = 0;
};
std::vector<Clause> SplitClauses(std::string_view text);

}  // namespace attrdial

#endif  // ATTRDIAL_TEXT_H_
