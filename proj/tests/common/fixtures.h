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
// Shared test data, random generators and brute-force oracles. The oracles
// read the raw movie list and never call the MovieKB relation index.

#ifndef ATTRDIAL_TESTS_COMMON_FIXTURES_H_
#define ATTRDIAL_TESTS_COMMON_FIXTURES_H_

#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "attrdial/datapipe.h"
#include "attrdial/engine.h"
#include "attrdial/extract.h"
#include "attrdial/kb.h"
#include "attrdial/recommender.h"
#include "attrdial/tracking.h"

namespace attrdial::testing {

std::string DataPath(const std::string& relative);
std::string TestDataPath(const std::string& relative);

// Loaded once and shared.
const MovieKB& DemoKb();        // data/kb/movies.jsonl
const MovieKB& ExDKb();         // two movies sharing one actor
const MovieKB& ExBKb();         // three movies, two of them action
const GenrePatternSet& DemoPatterns();

// Random KB with n movies over small genre and person pools. Every movie
// has 1-2 genres, 1-3 actors and one director.
MovieKB RandomKb(std::mt19937_64& rng, int n);

// A user utterance drawn from a fixed template pool over kb's attributes.
std::string RandomUserUtterance(std::mt19937_64& rng, const MovieKB& kb);

// A synthetic corpus dialog with recommendations, built from templates.
CorpusDialog RandomCorpusDialog(std::mt19937_64& rng, const MovieKB& kb,
                                const std::string& id);

// Oracle relatedness straight from the movie records: title-genre,
// title-person (actor or director), person-person (co-actors).
bool OracleRelated(const MovieKB& kb, const Attribute& a, const Attribute& b);
bool OracleHolds(const MovieKB& kb, const Attribute& s, Predicate p,
                 const Attribute& o);
double OraclePopularity(const MovieKB& kb, const Attribute& a);
std::vector<Attribute> OracleAttributesOfKind(const MovieKB& kb,
                                              AttributeKind kind);

// Enumerate every candidate, score it, sort it.
std::vector<std::pair<Attribute, int>> OracleRecommend(
    const RecommendationQuery& query, const MovieKB& kb, int k);

// Every type-preserving injective non-identity map of nodes into the KB
// under which all edges hold, by exhaustive product enumeration.
std::set<std::map<Attribute, Attribute>> OracleMonomorphisms(
    const RelationGraph& graph, const MovieKB& kb);

// Pair-set difference {(a, l) in predicted} \ {(a, l) in current}.
std::set<std::pair<Attribute, Label>> OracleDelta(
    const AttributeTracking& predicted, const AttributeTracking& current);

}  // namespace attrdial::testing

#endif  // ATTRDIAL_TESTS_COMMON_FIXTURES_H_
