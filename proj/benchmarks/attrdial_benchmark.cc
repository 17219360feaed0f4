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
// Hot paths of a dialog turn plus the augmentation search.

#include <set>
#include <string>
#include <vector>

#include "attrdial/datapipe.h"
#include "attrdial/engine.h"
#include "attrdial/extract.h"
#include "attrdial/kb.h"
#include "attrdial/recommender.h"
#include "benchmark/benchmark.h"

namespace attrdial {
namespace {

const MovieKB& Kb() {
  static const MovieKB kb =
      MovieKB::LoadFile(std::string(ATTRDIAL_DATA_DIR) + "/kb/movies.jsonl");
  return kb;
}

const GenrePatternSet& Patterns() {
  static const GenrePatternSet p = GenrePatternSet::LoadFile(
      std::string(ATTRDIAL_DATA_DIR) + "/genre_patterns.json");
  return p;
}

void BM_Extract(benchmark::State& state) {
  const MentionExtractor extractor(Kb(), Patterns());
  const std::string text =
      "I really like sci-fi, but tonight maybe something with Tom Cruise "
      "like Mission: Impossible or The Dark Knight?";
  for (auto _ : state) {
    benchmark::DoNotOptimize(extractor.Extract(text));
  }
  state.SetBytesProcessed(state.iterations() * text.size());
}
BENCHMARK(BM_Extract);

void BM_Recommend(benchmark::State& state) {
  RecommendationQuery q;
  q.positives.insert(Attribute(AttributeKind::kGenre, "action"));
  q.positives.insert(Attribute(AttributeKind::kPerson, "Tom Cruise"));
  q.negatives.insert(Attribute(AttributeKind::kGenre, "horror"));
  q.exclude.insert(Attribute(AttributeKind::kMovieTitle, "Top Gun: Maverick"));
  q.target_kind = AttributeKind::kMovieTitle;
  for (auto _ : state) {
    benchmark::DoNotOptimize(Recommend(q, Kb(), 5));
  }
}
BENCHMARK(BM_Recommend);

// One full session of three turns, so the numbers include tracking,
// delexicalization, prediction and generation.
void BM_EngineSession(benchmark::State& state) {
  const Engine engine(Kb(), Patterns());
  for (auto _ : state) {
    DialogSession s = engine.NewSession("b");
    engine.Step(s, "Hi! I am looking for a crime movie.");
    engine.Step(s, "I have already seen that one. Something else?");
    benchmark::DoNotOptimize(engine.Step(s, "Sounds good, thanks."));
  }
  state.SetItemsProcessed(state.iterations() * 3);
}
BENCHMARK(BM_EngineSession)->Unit(benchmark::kMicrosecond);

void BM_FindMonomorphisms(benchmark::State& state) {
  std::set<Attribute> nodes = {
      Attribute(AttributeKind::kGenre, "horror"),
      Attribute(AttributeKind::kMovieTitle, "Antlers"),
      Attribute(AttributeKind::kPerson, "Keri Russell"),
      Attribute(AttributeKind::kPerson, "Tom Cruise"),
      Attribute(AttributeKind::kMovieTitle, "Mission: Impossible"),
  };
  const RelationGraph g = BuildRelationGraph(nodes, Kb());
  for (auto _ : state) {
    benchmark::DoNotOptimize(FindMonomorphisms(g, Kb()));
  }
}
BENCHMARK(BM_FindMonomorphisms)->Unit(benchmark::kMicrosecond);

}  // namespace
}  // namespace attrdial

BENCHMARK_MAIN();
