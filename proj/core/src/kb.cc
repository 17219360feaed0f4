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

#include "attrdial/kb.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "attrdial/errors.h"
#include "attrdial/text.h"

namespace attrdial {

using json = nlohmann::ordered_json;

std::string_view KindName(AttributeKind kind) {
  switch (kind) {
    case AttributeKind::kMovieTitle:
      return "movie";
    case AttributeKind::kGenre:
      return "genre";
    case AttributeKind::kPerson:
      return "person";
  }
  return "movie";
}

std::optional<AttributeKind> ParseKind(std::string_view name) {
  if (name == "movie") return AttributeKind::kMovieTitle;
  if (name == "genre") return AttributeKind::kGenre;
  if (name == "person") return AttributeKind::kPerson;
  return std::nullopt;
}

std::string_view PredicateName(Predicate p) {
  switch (p) {
    case Predicate::kHasGenre:
      return "has_genre";
    case Predicate::kActedIn:
      return "acted_in";
    case Predicate::kDirected:
      return "directed";
    case Predicate::kCastWith:
      return "cast_with";
  }
  return "has_genre";
}

std::string CanonicalId(AttributeKind kind, std::string_view display) {
  return Canonicalize(display, kind == AttributeKind::kMovieTitle);
}

Attribute::Attribute(AttributeKind kind, std::string display)
    : kind_(kind), id_(CanonicalId(kind, display)), display_(std::move(display)) {}

Attribute Attribute::WithId(AttributeKind kind, std::string id,
                            std::string display) {
  Attribute a;
  a.kind_ = kind;
  a.id_ = std::move(id);
  a.display_ = std::move(display);
  return a;
}

std::string DebugString(const Attribute& a) {
  return std::string(KindName(a.kind())) + ":" + a.id();
}

namespace {

struct RawMovie {
  std::string title;
  std::optional<int> year;
  std::vector<std::string> genres;
  std::vector<std::string> actors;
  std::vector<std::string> directors;
  double popularity = 0.0;
  size_t line = 0;
};

[[noreturn]] void FailAt(size_t line, const std::string& what) {
  throw ParseError("KB line " + std::to_string(line) + ": " + what);
}

std::vector<std::string> ReadNames(const json& record, const char* field,
                                   size_t line) {
  std::vector<std::string> names;
  if (!record.contains(field)) return names;
  const json& list = record.at(field);
  if (!list.is_array()) FailAt(line, std::string(field) + " must be an array");
  for (const json& item : list) {
    if (!item.is_string()) {
      FailAt(line, std::string(field) + " entries must be strings");
    }
    names.push_back(item.get<std::string>());
    if (Canonicalize(names.back()).empty()) {
      FailAt(line, std::string("empty name in ") + field);
    }
  }
  return names;
}

RawMovie ParseRecord(const std::string& text, size_t line) {
  json record;
  try {
    record = json::parse(text);
  } catch (const json::parse_error& e) {
    FailAt(line, std::string("invalid JSON: ") + e.what());
  }
  if (!record.is_object()) FailAt(line, "record must be a JSON object");
  static const std::set<std::string> kFields = {
      "title", "year", "genres", "actors", "directors", "popularity"};
  for (const auto& item : record.items()) {
    if (!kFields.count(item.key())) FailAt(line, "unknown field " + item.key());
  }
  RawMovie raw;
  raw.line = line;
  if (!record.contains("title") || !record.at("title").is_string()) {
    FailAt(line, "title must be a string");
  }
  raw.title = record.at("title").get<std::string>();
  if (Canonicalize(raw.title, true).empty()) FailAt(line, "empty title");
  if (record.contains("year") && !record.at("year").is_null()) {
    if (!record.at("year").is_number_integer()) {
      FailAt(line, "year must be an integer or null");
    }
    raw.year = record.at("year").get<int>();
  }
  raw.genres = ReadNames(record, "genres", line);
  raw.actors = ReadNames(record, "actors", line);
  raw.directors = ReadNames(record, "directors", line);
  if (record.contains("popularity")) {
    if (!record.at("popularity").is_number()) {
      FailAt(line, "popularity must be a number");
    }
    raw.popularity = record.at("popularity").get<double>();
    if (!(raw.popularity >= 0.0) || !std::isfinite(raw.popularity)) {
      throw ValidationError("KB line " + std::to_string(line) +
                            ": popularity must be non-negative");
    }
  }
  return raw;
}

std::vector<Attribute> MakeAttributes(AttributeKind kind,
                                      const std::vector<std::string>& names) {
  std::vector<Attribute> out;
  out.reserve(names.size());
  for (const std::string& n : names) out.emplace_back(kind, n);
  return out;
}

json NumberJson(double value) {
  double integral = 0.0;
  if (std::modf(value, &integral) == 0.0 && std::fabs(value) < 1e15) {
    return static_cast<int64_t>(value);
  }
  return value;
}

}  // namespace

MovieKB MovieKB::Load(std::istream& in) {
  std::vector<RawMovie> raws;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    raws.push_back(ParseRecord(line, line_no));
  }

  std::map<std::string, std::vector<size_t>> by_title;
  for (size_t i = 0; i < raws.size(); ++i) {
    by_title[Canonicalize(raws[i].title, true)].push_back(i);
  }

  std::vector<Movie> movies;
  movies.reserve(raws.size());
  for (RawMovie& raw : raws) {
    Movie m;
    m.title_text = raw.title;
    m.title = Attribute(AttributeKind::kMovieTitle, raw.title);
    const auto& group = by_title[m.title.id()];
    if (group.size() > 1) {
      std::set<std::optional<int>> years;
      for (size_t j : group) {
        if (!raws[j].year || !years.insert(raws[j].year).second) {
          throw ValidationError("KB line " + std::to_string(raw.line) +
                                ": duplicate title+year for \"" + raw.title +
                                "\"");
        }
      }
      const std::string year = std::to_string(*raw.year);
      m.title = Attribute::WithId(AttributeKind::kMovieTitle,
                                  m.title.id() + " " + year,
                                  raw.title + " (" + year + ")");
    }
    m.year = raw.year;
    m.genres = MakeAttributes(AttributeKind::kGenre, raw.genres);
    m.actors = MakeAttributes(AttributeKind::kPerson, raw.actors);
    m.directors = MakeAttributes(AttributeKind::kPerson, raw.directors);
    m.popularity = raw.popularity;
    movies.push_back(std::move(m));
  }
  return FromMovies(std::move(movies));
}

MovieKB MovieKB::LoadFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open KB file " + path);
  return Load(in);
}

MovieKB MovieKB::FromMovies(std::vector<Movie> movies) {
  MovieKB kb;
  kb.movies_ = std::move(movies);
  kb.Index();
  return kb;
}

void MovieKB::Index() {
  auto check_kind = [](const std::vector<Attribute>& list, AttributeKind kind,
                       const Movie& m) {
    for (const Attribute& a : list) {
      if (a.kind() != kind) {
        throw ValidationError("movie \"" + m.title_text + "\": " +
                              DebugString(a) + " listed as " +
                              std::string(KindName(kind)));
      }
    }
  };

  // Genre and person names share one namespace; a name in both is ambiguous.
  std::map<std::string, AttributeKind> non_title_kind;
  auto add = [&](const Attribute& a) {
    if (a.kind() != AttributeKind::kMovieTitle) {
      auto [it, inserted] = non_title_kind.emplace(a.id(), a.kind());
      if (!inserted && it->second != a.kind()) {
        throw ValidationError("\"" + a.display() +
                              "\" is used both as a genre and as a person");
      }
    }
    gazetteer_.emplace(std::make_pair(a.kind(), a.id()), a);
  };

  std::set<Relation> relations;
  auto link = [&](const Attribute& subject, Predicate p,
                  const Attribute& object) {
    if (!relations.insert(Relation{subject, p, object}).second) return;
    adjacency_[subject].push_back(Edge{p, object});
    adjacency_[object].push_back(Edge{p, subject});
  };
  auto bump = [&](const Attribute& a, double popularity) {
    auto [it, inserted] = popularity_.emplace(a, popularity);
    if (!inserted) it->second = std::max(it->second, popularity);
  };

  for (size_t i = 0; i < movies_.size(); ++i) {
    const Movie& m = movies_[i];
    if (m.title.kind() != AttributeKind::kMovieTitle) {
      throw ValidationError("movie title " + DebugString(m.title) +
                            " is not a movie attribute");
    }
    check_kind(m.genres, AttributeKind::kGenre, m);
    check_kind(m.actors, AttributeKind::kPerson, m);
    check_kind(m.directors, AttributeKind::kPerson, m);
    if (!movie_index_.emplace(m.title, i).second) {
      throw ValidationError("duplicate title+year for \"" + m.title_text +
                            "\"");
    }
    add(m.title);
    bump(m.title, m.popularity);
    for (const Attribute& g : m.genres) {
      add(g);
      bump(g, m.popularity);
      link(m.title, Predicate::kHasGenre, g);
    }
    for (const Attribute& p : m.actors) {
      add(p);
      bump(p, m.popularity);
      link(p, Predicate::kActedIn, m.title);
    }
    for (const Attribute& p : m.directors) {
      add(p);
      bump(p, m.popularity);
      link(p, Predicate::kDirected, m.title);
    }
  }
  relations_.assign(relations.begin(), relations.end());
}

void MovieKB::Serialize(std::ostream& out) const {
  for (const Movie& m : movies_) {
    json record;
    record["title"] = m.title_text;
    record["year"] = m.year ? json(*m.year) : json(nullptr);
    auto names = [](const std::vector<Attribute>& list) {
      json arr = json::array();
      for (const Attribute& a : list) arr.push_back(a.display());
      return arr;
    };
    record["genres"] = names(m.genres);
    record["actors"] = names(m.actors);
    record["directors"] = names(m.directors);
    record["popularity"] = NumberJson(m.popularity);
    out << record.dump() << '\n';
  }
}

std::string MovieKB::SerializeToString() const {
  std::ostringstream out;
  Serialize(out);
  return out.str();
}

const Attribute* MovieKB::Find(AttributeKind kind, std::string_view id) const {
  auto it = gazetteer_.find(std::make_pair(kind, std::string(id)));
  return it == gazetteer_.end() ? nullptr : &it->second;
}

const Movie* MovieKB::FindMovie(const Attribute& title) const {
  auto it = movie_index_.find(title);
  return it == movie_index_.end() ? nullptr : &movies_[it->second];
}

std::vector<Attribute> MovieKB::AttributesOfKind(AttributeKind kind) const {
  std::vector<Attribute> out;
  for (const auto& [key, a] : gazetteer_) {
    if (key.first == kind) out.push_back(a);
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool MovieKB::Holds(const Attribute& subject, Predicate predicate,
                    const Attribute& object) const {
  if (predicate == Predicate::kCastWith) {
    if (subject.kind() != AttributeKind::kPerson ||
        object.kind() != AttributeKind::kPerson || subject == object) {
      return false;
    }
    for (const Attribute& movie : Neighbors(subject, Predicate::kActedIn)) {
      if (Holds(object, Predicate::kActedIn, movie)) return true;
    }
    return false;
  }
  return std::binary_search(relations_.begin(), relations_.end(),
                            Relation{subject, predicate, object});
}

bool MovieKB::Related(const Attribute& a, const Attribute& b) const {
  if (a == b) return false;
  auto it = adjacency_.find(a);
  if (it == adjacency_.end()) return false;
  for (const Edge& e : it->second) {
    if (e.other == b) return true;
  }
  return Holds(a, Predicate::kCastWith, b);
}

std::vector<Attribute> MovieKB::Neighbors(
    const Attribute& a, std::optional<Predicate> predicate) const {
  std::set<Attribute> out;
  auto it = adjacency_.find(a);
  if (it != adjacency_.end()) {
    for (const Edge& e : it->second) {
      if (!predicate || *predicate == e.predicate) out.insert(e.other);
    }
    const bool want_cast = !predicate || *predicate == Predicate::kCastWith;
    if (want_cast && a.kind() == AttributeKind::kPerson) {
      for (const Edge& e : it->second) {
        if (e.predicate != Predicate::kActedIn) continue;
        for (const Edge& co : adjacency_.at(e.other)) {
          if (co.predicate == Predicate::kActedIn && co.other != a) {
            out.insert(co.other);
          }
        }
      }
    }
  }
  return {out.begin(), out.end()};
}

double MovieKB::Popularity(const Attribute& a) const {
  auto it = popularity_.find(a);
  return it == popularity_.end() ? 0.0 : it->second;
}

}  // namespace attrdial
