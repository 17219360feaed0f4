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

#include "fixtures.h"

#include <algorithm>
#include <functional>
#include <sstream>

#include <nlohmann/json.hpp>

namespace attrdial::testing {
namespace {

const char* const kGenres[] = {"action",  "comedy", "drama",   "horror",
                               "romance", "thriller", "crime", "fantasy"};
const char* const kFirst[] = {"Ada",   "Bruno", "Clara", "Dmitri",
                              "Elena", "Felix", "Greta", "Hugo",
                              "Ines",  "Jonas", "Kira",  "Luca"};
const char* const kLast[] = {"Abbott", "Brandt",   "Castillo", "Duval",
                             "Eriksen", "Fontaine", "Gallo",   "Hale"};
const char* const kAdjectives[] = {"Silver", "Crimson", "Hidden", "Broken",
                                   "Golden", "Quiet",   "Distant", "Frozen",
                                   "Burning", "Velvet"};
const char* const kNouns[] = {"Harbor",  "Garden", "Empire",  "Signal",
                              "Orchard", "Canyon", "River",   "Station",
                              "Lantern", "Mirror"};

template <typename T, size_t N>
const T& Pick(std::mt19937_64& rng, const T (&items)[N]) {
  return items[rng() % N];
}

template <typename T>
const T& Pick(std::mt19937_64& rng, const std::vector<T>& items) {
  return items[rng() % items.size()];
}

const Movie* OracleMovie(const MovieKB& kb, const Attribute& title) {
  for (const Movie& m : kb.movies()) {
    if (m.title == title) return &m;
  }
  return nullptr;
}

bool Contains(const std::vector<Attribute>& v, const Attribute& a) {
  return std::find(v.begin(), v.end(), a) != v.end();
}

}  // namespace

std::string DataPath(const std::string& relative) {
  return std::string(ATTRDIAL_DATA_DIR) + "/" + relative;
}

std::string TestDataPath(const std::string& relative) {
  return std::string(ATTRDIAL_TEST_DATA_DIR) + "/" + relative;
}

const MovieKB& DemoKb() {
  static const MovieKB kb = MovieKB::LoadFile(DataPath("kb/movies.jsonl"));
  return kb;
}

const MovieKB& ExDKb() {
  static const MovieKB kb = MovieKB::LoadFile(TestDataPath("kb_ex_d.jsonl"));
  return kb;
}

const MovieKB& ExBKb() {
  static const MovieKB kb = MovieKB::LoadFile(TestDataPath("kb_ex_b.jsonl"));
  return kb;
}

const GenrePatternSet& DemoPatterns() {
  static const GenrePatternSet p =
      GenrePatternSet::LoadFile(DataPath("genre_patterns.json"));
  return p;
}

MovieKB RandomKb(std::mt19937_64& rng, int n) {
  std::set<std::string> titles;
  std::ostringstream out;
  while (static_cast<int>(titles.size()) < n) {
    std::string title =
        std::string(Pick(rng, kAdjectives)) + " " + Pick(rng, kNouns);
    if (!titles.insert(title).second) continue;
    nlohmann::json j;
    j["title"] = title;
    j["year"] = 1990 + static_cast<int>(rng() % 30);
    std::set<std::string> genres;
    const int n_genres = 1 + static_cast<int>(rng() % 2);
    while (static_cast<int>(genres.size()) < n_genres) {
      genres.insert(Pick(rng, kGenres));
    }
    std::set<std::string> actors;
    const int n_actors = 1 + static_cast<int>(rng() % 3);
    while (static_cast<int>(actors.size()) < n_actors) {
      actors.insert(std::string(Pick(rng, kFirst)) + " " + Pick(rng, kLast));
    }
    j["genres"] = std::vector<std::string>(genres.begin(), genres.end());
    j["actors"] = std::vector<std::string>(actors.begin(), actors.end());
    j["directors"] = {std::string(Pick(rng, kFirst)) + " " + Pick(rng, kLast)};
    j["popularity"] = 1 + static_cast<int>(rng() % 20);
    out << j.dump() << "\n";
  }
  std::istringstream in(out.str());
  return MovieKB::Load(in);
}

std::string RandomUserUtterance(std::mt19937_64& rng, const MovieKB& kb) {
  const std::vector<Attribute> titles =
      kb.AttributesOfKind(AttributeKind::kMovieTitle);
  const std::vector<Attribute> genres = kb.AttributesOfKind(AttributeKind::kGenre);
  const std::vector<Attribute> persons =
      kb.AttributesOfKind(AttributeKind::kPerson);
  const std::string g = Pick(rng, genres).display();
  const std::string p = Pick(rng, persons).display();
  const std::string t = Pick(rng, titles).display();
  switch (rng() % 14) {
    case 0:
      return "I like " + g + " movies.";
    case 1:
      return "I really love " + p + ".";
    case 2:
      return "I don't like " + g + ".";
    case 3:
      return "Have you seen " + t + "?";
    case 4:
      return "I have already seen that one.";
    case 5:
      return "Can you recommend something else?";
    case 6:
      return "Sounds good, I will watch it.";
    case 7:
      return "Tell me more about it.";
    case 8:
      return "Who is in it?";
    case 9:
      return "I hate " + p + " but I like " + g + ".";
    case 10:
      return "Maybe " + t + "?";
    case 11:
      return "I am in the mood for " + g + " with " + p + ".";
    case 12:
      return "I loved " + t + " and " + g + " in general.";
    default:
      return "Hmm, not sure.";
  }
}

CorpusDialog RandomCorpusDialog(std::mt19937_64& rng, const MovieKB& kb,
                                const std::string& id) {
  const Movie& first = Pick(rng, kb.movies());
  const Movie& second = Pick(rng, kb.movies());
  CorpusDialog d;
  d.id = id;
  auto add = [&d](Side side, std::string text) {
    d.turns.push_back(Turn{side, std::move(text), {}});
  };
  const std::string genre = first.genres.empty()
                                ? std::string("action")
                                : first.genres.front().display();
  add(Side::kUser, "I am in the mood for " + genre + ".");
  add(Side::kSystem, "You could watch " + first.title_text + ".");
  d.recommendations.push_back({2, first.title_text});
  switch (rng() % 3) {
    case 0:
      add(Side::kUser, "I have seen that one.");
      break;
    case 1:
      add(Side::kUser, "Who stars in it?");
      break;
    default:
      add(Side::kUser, "I do not like " +
                           Pick(rng, kb.AttributesOfKind(AttributeKind::kGenre))
                               .display() +
                           " though.");
      break;
  }
  std::string pitch = "Then try " + second.title_text;
  if (!second.actors.empty()) {
    pitch += " with " + second.actors.front().display();
  }
  add(Side::kSystem, pitch + ".");
  d.recommendations.push_back({4, second.title_text});
  if (rng() % 2) add(Side::kUser, "Sounds good.");
  return d;
}

bool OracleHolds(const MovieKB& kb, const Attribute& s, Predicate p,
                 const Attribute& o) {
  switch (p) {
    case Predicate::kHasGenre: {
      const Movie* m = OracleMovie(kb, s);
      return m && Contains(m->genres, o);
    }
    case Predicate::kActedIn: {
      const Movie* m = OracleMovie(kb, o);
      return m && Contains(m->actors, s);
    }
    case Predicate::kDirected: {
      const Movie* m = OracleMovie(kb, o);
      return m && Contains(m->directors, s);
    }
    case Predicate::kCastWith:
      if (s == o) return false;
      for (const Movie& m : kb.movies()) {
        if (Contains(m.actors, s) && Contains(m.actors, o)) return true;
      }
      return false;
  }
  return false;
}

bool OracleRelated(const MovieKB& kb, const Attribute& a, const Attribute& b) {
  if (a == b) return false;
  for (const Movie& m : kb.movies()) {
    const bool a_title = m.title == a;
    const bool b_title = m.title == b;
    if (!a_title && !b_title) continue;
    const Attribute& other = a_title ? b : a;
    if (Contains(m.genres, other) || Contains(m.actors, other) ||
        Contains(m.directors, other)) {
      return true;
    }
  }
  if (a.kind() == AttributeKind::kPerson && b.kind() == AttributeKind::kPerson) {
    return OracleHolds(kb, a, Predicate::kCastWith, b);
  }
  return false;
}

double OraclePopularity(const MovieKB& kb, const Attribute& a) {
  double best = 0.0;
  for (const Movie& m : kb.movies()) {
    if (m.title == a || Contains(m.genres, a) || Contains(m.actors, a) ||
        Contains(m.directors, a)) {
      best = std::max(best, m.popularity);
    }
  }
  return best;
}

std::vector<Attribute> OracleAttributesOfKind(const MovieKB& kb,
                                              AttributeKind kind) {
  std::set<Attribute> out;
  for (const Movie& m : kb.movies()) {
    switch (kind) {
      case AttributeKind::kMovieTitle:
        out.insert(m.title);
        break;
      case AttributeKind::kGenre:
        out.insert(m.genres.begin(), m.genres.end());
        break;
      case AttributeKind::kPerson:
        out.insert(m.actors.begin(), m.actors.end());
        out.insert(m.directors.begin(), m.directors.end());
        break;
    }
  }
  return {out.begin(), out.end()};
}

std::vector<std::pair<Attribute, int>> OracleRecommend(
    const RecommendationQuery& query, const MovieKB& kb, int k) {
  struct Row {
    Attribute a;
    int score;
    double popularity;
  };
  std::vector<Row> rows;
  for (const Attribute& c : OracleAttributesOfKind(kb, query.target_kind)) {
    if (query.exclude.count(c) || query.positives.count(c)) continue;
    if (c.kind() == AttributeKind::kMovieTitle && query.negatives.count(c)) {
      continue;
    }
    int score = 0;
    for (const Attribute& p : query.positives) score += OracleRelated(kb, c, p);
    for (const Attribute& n : query.negatives) score -= OracleRelated(kb, c, n);
    if (!query.positives.empty() && score <= 0) continue;
    rows.push_back({c, score, OraclePopularity(kb, c)});
  }
  std::sort(rows.begin(), rows.end(), [](const Row& x, const Row& y) {
    return std::make_tuple(-x.score, -x.popularity, x.a.id()) <
           std::make_tuple(-y.score, -y.popularity, y.a.id());
  });
  std::vector<std::pair<Attribute, int>> out;
  for (int i = 0; i < k && i < static_cast<int>(rows.size()); ++i) {
    out.emplace_back(rows[i].a, rows[i].score);
  }
  return out;
}

std::set<std::map<Attribute, Attribute>> OracleMonomorphisms(
    const RelationGraph& graph, const MovieKB& kb) {
  std::set<std::map<Attribute, Attribute>> out;
  const std::vector<Attribute>& nodes = graph.nodes;
  std::vector<Attribute> image(nodes.size());
  std::vector<std::vector<Attribute>> candidates;
  for (const Attribute& n : nodes) {
    candidates.push_back(OracleAttributesOfKind(kb, n.kind()));
  }
  std::function<void(size_t)> rec = [&](size_t i) {
    if (i == nodes.size()) {
      if (image == nodes) return;
      std::map<Attribute, Attribute> m;
      for (size_t j = 0; j < nodes.size(); ++j) m.emplace(nodes[j], image[j]);
      for (const Relation& r : graph.edges) {
        if (!OracleHolds(kb, m.at(r.subject), r.predicate, m.at(r.object))) {
          return;
        }
      }
      out.insert(std::move(m));
      return;
    }
    for (const Attribute& c : candidates[i]) {
      if (std::find(image.begin(), image.begin() + i, c) != image.begin() + i) {
        continue;
      }
      image[i] = c;
      rec(i + 1);
    }
  };
  rec(0);
  return out;
}

std::set<std::pair<Attribute, Label>> OracleDelta(
    const AttributeTracking& predicted, const AttributeTracking& current) {
  std::set<std::pair<Attribute, Label>> p;
  std::set<std::pair<Attribute, Label>> c;
  for (const auto& [a, l] : predicted.map()) p.emplace(a, l);
  for (const auto& [a, l] : current.map()) c.emplace(a, l);
  std::set<std::pair<Attribute, Label>> out;
  std::set_difference(p.begin(), p.end(), c.begin(), c.end(),
                      std::inserter(out, out.end()));
  return out;
}

}  // namespace attrdial::testing
