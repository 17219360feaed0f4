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

#include "attrdial/recommender.h"

#include <algorithm>

namespace attrdial {

std::vector<ScoredCandidate> Recommend(const RecommendationQuery& query,
                                       const MovieKB& kb, int k) {
  if (k <= 0) return {};
  struct Ranked {
    ScoredCandidate candidate;
    double popularity;
  };
  std::vector<Ranked> ranked;
  for (const Attribute& c : kb.AttributesOfKind(query.target_kind)) {
    if (query.exclude.count(c) || query.positives.count(c)) continue;
    if (c.kind() == AttributeKind::kMovieTitle && query.negatives.count(c)) {
      continue;
    }
    ScoredCandidate sc{c, 0, {}};
    for (const Attribute& p : query.positives) {
      if (kb.Related(c, p)) {
        sc.matched.insert(p);
        ++sc.score;
      }
    }
    for (const Attribute& n : query.negatives) {
      if (kb.Related(c, n)) {
        sc.matched.insert(n);
        --sc.score;
      }
    }
    if (!query.positives.empty() && sc.score <= 0) continue;
    ranked.push_back({std::move(sc), kb.Popularity(c)});
  }
  std::sort(ranked.begin(), ranked.end(), [](const Ranked& a, const Ranked& b) {
    if (a.candidate.score != b.candidate.score) {
      return a.candidate.score > b.candidate.score;
    }
    if (a.popularity != b.popularity) return a.popularity > b.popularity;
    return a.candidate.attribute.id() < b.candidate.attribute.id();
  });
  std::vector<ScoredCandidate> out;
  for (size_t i = 0; i < ranked.size() && static_cast<int>(i) < k; ++i) {
    out.push_back(std::move(ranked[i].candidate));
  }
  return out;
}

std::vector<ScoredCandidate> KbRecommender::Recommend(
    const RecommendationQuery& query, int k) const {
  return attrdial::Recommend(query, *kb_, k);
}

}  // namespace attrdial
