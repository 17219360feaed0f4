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
// Corpus files, weakly supervised pos/neg annotation and relation-preserving
// attribute substitution.
//
// Corpus file: one JSON dialog per line,
//   {"id": str, "turns": [{"speaker": "user"|"system", "text": str}],
//    "recommendations": [{"turn": int, "title": str}]}
// Annotated dialogs carry an extra "gold" array with one
// {"user": tracking, "system": tracking} object per turn.

#ifndef ATTRDIAL_DATAPIPE_H_
#define ATTRDIAL_DATAPIPE_H_

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "attrdial/dialog.h"
#include "attrdial/extract.h"
#include "attrdial/kb.h"
#include "attrdial/payload.h"
#include "attrdial/tracking.h"

namespace attrdial {

struct CorpusEvent {
  int turn = 0;  // 1-based turn that recommended the title
  std::string title;
  friend bool operator==(const CorpusEvent&, const CorpusEvent&) = default;
};

struct CorpusDialog {
  std::string id;
  std::vector<Turn> turns;  // mentions are left empty on load
  std::vector<CorpusEvent> recommendations;
  std::optional<std::vector<TurnTrackings>> gold;
};

// Throws ParseError on malformed records and ValidationError when event
// turns are out of range or out of order.
CorpusDialog DialogFromJson(const Json& j, const AttributeRegistry& registry);
Json DialogToJson(const CorpusDialog& dialog);

// Line-delimited corpus I/O. Blank lines are skipped; errors name the line.
std::vector<CorpusDialog> LoadCorpus(std::istream& in,
                                     const AttributeRegistry& registry);
std::vector<CorpusDialog> LoadCorpusFile(const std::string& path,
                                         const AttributeRegistry& registry);
void WriteCorpus(std::ostream& out, const std::vector<CorpusDialog>& corpus);

// Copies of the dialog's turns with mentions filled in by the extractor.
std::vector<Turn> ExtractTurns(const CorpusDialog& dialog,
                               const MentionExtractor& extractor);

// Resolves every event title to a KB movie. Throws ValidationError naming
// the title when it is not one.
std::vector<Attribute> ResolveEvents(const CorpusDialog& dialog,
                                     const MentionExtractor& extractor);

struct Annotation {
  std::vector<TurnTrackings> gold;  // one per turn; empty when skipped
  std::optional<std::string> diagnostic;
};

// Labels, for every turn i, each attribute mentioned up to i on each side:
// pos iff it is the governing recommendation or related to it in the KB,
// neg otherwise. The governing recommendation of turn i is the first event
// at or after i; turns after the last event fall under the last event.
// Recommended titles count as system-side mentions from their event turn.
Annotation Annotate(const CorpusDialog& dialog,
                    const MentionExtractor& extractor);

// Attributes of one dialog and the stored KB relations among them.
struct RelationGraph {
  std::vector<Attribute> nodes;  // sorted
  std::vector<Relation> edges;   // sorted

  friend bool operator==(const RelationGraph&, const RelationGraph&) = default;
};

RelationGraph BuildRelationGraph(const std::set<Attribute>& attributes,
                                 const MovieKB& kb);
RelationGraph BuildRelationGraph(const CorpusDialog& dialog,
                                 const MentionExtractor& extractor);

// A type-preserving injective map from graph nodes to KB attributes.
using AttributeMapping = std::map<Attribute, Attribute>;

// Every non-identity mapping under which each graph edge still holds in
// the KB (monomorphisms; extra KB edges among the image are allowed).
// Search stops after limit mappings. Ordered by the node images, compared
// in node order.
std::vector<AttributeMapping> FindMonomorphisms(const RelationGraph& graph,
                                                const MovieKB& kb,
                                                size_t limit = 200000);

// Rewrites every mention span and event title through the mapping.
// extracted and events come from ExtractTurns and ResolveEvents.
CorpusDialog ApplyMapping(const CorpusDialog& dialog,
                          const std::vector<Turn>& extracted,
                          const std::vector<Attribute>& events,
                          const AttributeMapping& mapping,
                          const std::string& new_id);

struct AugmentOptions {
  int multiplier = 1;
  uint64_t seed = 0;
  size_t search_limit = 200000;
};

struct AugmentResult {
  std::vector<CorpusDialog> dialogs;
  size_t mappings_found = 0;
  size_t rejected = 0;  // candidates that failed validation
  std::optional<std::string> diagnostic;
};

// Draws up to multiplier distinct mappings by a seeded shuffle of the full
// mapping list and emits the rewritten dialogs with ids "<id>-aug<j>",
// j from 1. Only dialogs passing ValidateAugmentation are emitted.
AugmentResult Augment(const CorpusDialog& dialog,
                      const MentionExtractor& extractor,
                      const AugmentOptions& options);

// True iff the substituted dialog lines up mention by mention with the
// original, the aligned attribute pairs form an injective, type-preserving,
// non-identity mapping, and every original edge maps onto an edge of the
// substituted dialog's graph.
bool ValidateAugmentation(const CorpusDialog& original,
                          const CorpusDialog& substituted,
                          const MentionExtractor& extractor,
                          std::string* why = nullptr);

}  // namespace attrdial

#endif  // ATTRDIAL_DATAPIPE_H_
