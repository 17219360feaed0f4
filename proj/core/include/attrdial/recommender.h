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

#ifndef ATTRDIAL_RECOMMENDER_H_
#define ATTRDIAL_RECOMMENDER_H_

#include <set>
#include <vector>

#include "attrdial/kb.h"

namespace attrdial {

struct RecommendationQuery {
  std::set<Attribute> positives;
  std::set<Attribute> negatives;
  AttributeKind target_kind = AttributeKind::kMovieTitle;
  std::set<Attribute> exclude;  // already recommended or rejected
};

struct ScoredCandidate {
  Attribute attribute;
  int score = 0;  // |matched & positives| - |matched & negatives|
  std::set<Attribute> matched;
};

// Pluggable recommendation backend.
class Recommender {
 public:
  virtual ~Recommender() = default;
  // At most k candidates of query.target_kind, best first. Never returns an
  // attribute from query.exclude.
  virtual std::vector<ScoredCandidate> Recommend(const RecommendationQuery& query,
                                                 int k) const = 0;
};

// Scores every KB attribute of the target kind by how many query attributes
// it is directly related to (positives count +1, negatives -1).
//
// Candidates never include the query's own positives, the exclude set, or
// (for title queries) any negative title. When the query has positives,
// only candidates with a positive score are returned; with no positives the
// list degrades to a popularity ranking. Order: score desc, popularity desc,
// canonical id asc.
std::vector<ScoredCandidate> Recommend(const RecommendationQuery& query,
                                       const MovieKB& kb, int k);

class KbRecommender : public Recommender {
 public:
  explicit KbRecommender(const MovieKB& kb) : kb_(&kb) {}
  std::vector<ScoredCandidate> Recommend(const RecommendationQuery& query,
                                         int k) const override;

 private:
  const MovieKB* kb_;
};

}  // namespace attrdial

#endif  // ATTRDIAL_RECOMMENDER_H_
