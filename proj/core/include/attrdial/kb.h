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
// Movie knowledge base: typed attributes, movies and the relations between
// them. A MovieKB is immutable once loaded and safe to share across threads.

#ifndef ATTRDIAL_KB_H_
#define ATTRDIAL_KB_H_

#include <compare>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace attrdial {

enum class AttributeKind { kMovieTitle = 0, kGenre = 1, kPerson = 2 };

inline constexpr AttributeKind kAllKinds[] = {
    AttributeKind::kMovieTitle, AttributeKind::kGenre, AttributeKind::kPerson};

// "movie", "genre", "person".
std::string_view KindName(AttributeKind kind);
std::optional<AttributeKind> ParseKind(std::string_view name);

// Canonical id of a surface string for the given kind. Titles additionally
// drop a leading article.
std::string CanonicalId(AttributeKind kind, std::string_view display);

// A typed movie-domain entity. Identity is (kind, id); display is the
// surface string it was built from and does not take part in comparisons.
class Attribute {
 public:
  Attribute() = default;
  Attribute(AttributeKind kind, std::string display);

  // Trusted constructor for deserialization, where the id was computed
  // earlier and may carry a year suffix.
  static Attribute WithId(AttributeKind kind, std::string id,
                          std::string display);

  AttributeKind kind() const { return kind_; }
  const std::string& id() const { return id_; }
  const std::string& display() const { return display_; }

  // Ordered by canonical id first so that sorted sets read alphabetically.
  friend bool operator==(const Attribute& a, const Attribute& b) {
    return a.kind_ == b.kind_ && a.id_ == b.id_;
  }
  friend std::strong_ordering operator<=>(const Attribute& a,
                                          const Attribute& b) {
    if (auto c = a.id_ <=> b.id_; c != 0) return c;
    return a.kind_ <=> b.kind_;
  }

 private:
  AttributeKind kind_ = AttributeKind::kMovieTitle;
  std::string id_;
  std::string display_;
};

// "movie:avengers endgame" style key, handy in diagnostics.
std::string DebugString(const Attribute& a);

struct Movie {
  Attribute title;
  std::string title_text;  // title exactly as written in the KB file
  std::optional<int> year;
  std::vector<Attribute> genres;
  std::vector<Attribute> actors;
  std::vector<Attribute> directors;
  double popularity = 0.0;
};

enum class Predicate { kHasGenre, kActedIn, kDirected, kCastWith };

std::string_view PredicateName(Predicate p);

struct Relation {
  Attribute subject;
  Predicate predicate;
  Attribute object;

  friend bool operator==(const Relation&, const Relation&) = default;
  friend auto operator<=>(const Relation& a, const Relation& b) {
    if (auto c = a.subject <=> b.subject; c != 0) return c;
    if (auto c = a.predicate <=> b.predicate; c != 0) return c;
    return a.object <=> b.object;
  }
};

class MovieKB {
 public:
  MovieKB() = default;

  // Reads one JSON object per line. Throws ParseError (with the line
  // number) on malformed records and ValidationError on duplicate
  // title+year or kind conflicts.
  static MovieKB Load(std::istream& in);
  static MovieKB LoadFile(const std::string& path);
  static MovieKB FromMovies(std::vector<Movie> movies);

  // Writes the canonical line-delimited form. Loading the output and
  // serializing again is byte-identical.
  void Serialize(std::ostream& out) const;
  std::string SerializeToString() const;

  const std::vector<Movie>& movies() const { return movies_; }
  const std::map<std::pair<AttributeKind, std::string>, Attribute>&
  gazetteer() const {
    return gazetteer_;
  }

  // Gazetteer lookup by kind and canonical id.
  const Attribute* Find(AttributeKind kind, std::string_view id) const;
  const Movie* FindMovie(const Attribute& title) const;
  std::vector<Attribute> AttributesOfKind(AttributeKind kind) const;

  // All stored relations (has_genre, acted_in, directed), sorted and
  // deduplicated. cast_with is derived on demand and never listed here.
  const std::vector<Relation>& relations() const { return relations_; }

  // True iff a stored relation or cast_with links a and b in either
  // direction. Never true for a == b.
  bool Related(const Attribute& a, const Attribute& b) const;

  // True iff the relation (subject, predicate, object) holds as written.
  bool Holds(const Attribute& subject, Predicate predicate,
             const Attribute& object) const;

  // Attributes linked to a, in either direction, optionally restricted to
  // one predicate. Sorted by canonical id.
  std::vector<Attribute> Neighbors(
      const Attribute& a, std::optional<Predicate> predicate = {}) const;

  // Movie popularity for titles; for genres and persons, the highest
  // popularity among their movies. 0 for unknown attributes.
  double Popularity(const Attribute& a) const;

 private:
  void Index();

  struct Edge {
    Predicate predicate;
    Attribute other;
  };

  std::vector<Movie> movies_;
  std::map<std::pair<AttributeKind, std::string>, Attribute> gazetteer_;
  std::map<Attribute, size_t> movie_index_;
  std::map<Attribute, std::vector<Edge>> adjacency_;
  std::map<Attribute, double> popularity_;
  std::vector<Relation> relations_;
};

}  // namespace attrdial

#endif  // ATTRDIAL_KB_H_
