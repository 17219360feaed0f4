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
// Response generation conditioned on the attribute delta.

#ifndef ATTRDIAL_GENERATOR_H_
#define ATTRDIAL_GENERATOR_H_

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "attrdial/extract.h"
#include "attrdial/kb.h"
#include "attrdial/predictor.h"
#include "attrdial/tracking.h"

namespace attrdial {

enum class Phase { kElicit, kRecommend, kReengage, kSocial, kClosing };

inline constexpr Phase kAllPhases[] = {Phase::kElicit, Phase::kRecommend,
                                       Phase::kReengage, Phase::kSocial,
                                       Phase::kClosing};

std::string_view PhaseName(Phase phase);
std::optional<Phase> ParsePhase(std::string_view name);

struct GenerationInput {
  int turn = 0;         // index of the response turn
  std::string context;  // dialog history, one "speaker: text" line per turn
  AttributeDelta delta;
  Phase phase = Phase::kSocial;
  // The system tracking the response is generated against (T_i^sys).
  AttributeTracking current_system;
  // For re-engagement: the genre to steer back to, if any.
  std::optional<Attribute> focus_genre;
};

struct Response {
  std::string text;
  std::set<Attribute> realized;
};

class ResponseGenerator {
 public:
  virtual ~ResponseGenerator() = default;
  virtual Response Generate(const GenerationInput& input) const = 0;
};

// Template generator. Each template key has at least two surface variants;
// the variant is picked by a hash of (seed, turn, key), so a session with a
// fixed seed always says the same thing. Every positive delta attribute is
// realized: attributes no template consumed are appended in a trailing
// sentence.
class TemplateGenerator : public ResponseGenerator {
 public:
  TemplateGenerator(const MovieKB& kb, uint64_t seed) : kb_(&kb), seed_(seed) {}
  Response Generate(const GenerationInput& input) const override;

  uint64_t seed() const { return seed_; }

 private:
  // Picks one of n variants for the template key.
  size_t Variant(int turn, std::string_view key, size_t n) const;

  const MovieKB* kb_;
  uint64_t seed_;
};

// True iff every positive delta attribute occurs in text: its display form
// (or, for titles, the form without a leading article, or a genre alias)
// matches a contiguous run of canonical tokens.
bool VerifyRealization(std::string_view text, const AttributeDelta& delta,
                       const GenrePatternSet* patterns = nullptr);

// "A", "A and B", "A, B and C".
std::string JoinNames(const std::vector<std::string>& names);

}  // namespace attrdial

#endif  // ATTRDIAL_GENERATOR_H_
