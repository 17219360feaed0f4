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

#include "attrdial/generator.h"

#include <algorithm>
#include <array>

#include "attrdial/text.h"

namespace attrdial {
namespace {

uint64_t Mix(uint64_t x) {
  // splitmix64 finalizer.
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

uint64_t Fnv1a(std::string_view s) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string Fill(std::string_view pattern, std::string_view slot,
                 std::string_view value) {
  std::string out(pattern);
  const size_t at = out.find(slot);
  if (at != std::string::npos) out.replace(at, slot.size(), value);
  return out;
}

std::string Capitalized(std::string s) {
  if (!s.empty() && s[0] >= 'a' && s[0] <= 'z') s[0] = s[0] - 'a' + 'A';
  return s;
}

std::vector<std::string> Displays(const std::vector<Attribute>& attrs) {
  std::vector<std::string> out;
  for (const Attribute& a : attrs) out.push_back(a.display());
  return out;
}

// Template inventory. Index 0 of each list is the canonical phrasing.
constexpr std::array kElicit = {
    "What kind of movies do you enjoy watching?",
    "What kind of movies are you in the mood for?",
};
constexpr std::array kRecommend = {
    "I recommend the movie {M}",
    "I would like to recommend {M}.",
};
constexpr std::array kRecommendGenre = {
    "Since you like {G}, I recommend the movie {M}.",
    "If you are into {G}, I would like to recommend {M}.",
};
constexpr std::array kMention = {
    "Have you seen {M}?",
    "What do you think of {M}?",
};
constexpr std::array kMoreMovies = {
    "You might also enjoy {M}.",
    "There is also {M}.",
};
constexpr std::array kCastLink = {
    "{P} were cast together for {M}.",
    "{P} both acted in {M}.",
};
constexpr std::array kStars = {
    "{P} stars in {M}.",
    "{M} features {P}.",
};
constexpr std::array kDirected = {
    "{P} directed {M}.",
    "{M} was directed by {P}.",
};
constexpr std::array kPersonAsk = {
    "Have you heard about {P}?",
    "Do you know {P}?",
};
constexpr std::array kGenreSocial = {
    "I enjoy {G} movies too.",
    "{G} movies are a lot of fun.",
};
constexpr std::array kReengageGenre = {
    "That is a great choice. Have you watched any of the other {G} movies "
    "yet?",
    "No problem. Have you seen any other {G} movies?",
};
constexpr std::array kReengage = {
    "No problem. What else are you in the mood for?",
    "Okay. Is there another kind of movie you would like?",
};
constexpr std::array kContrast = {
    "Okay, not {N}.",
    "Got it, no {N}.",
};
constexpr std::array kLeftover = {
    "I also like {X}.",
    "I am a fan of {X} too.",
};
constexpr std::array kClosing = {
    "Enjoy the movie!",
    "Have a great time watching!",
};
constexpr std::array kSocial = {
    "That sounds fun. Tell me more about what you like to watch.",
    "I see. What do you usually look for in a movie?",
};

}  // namespace

std::string_view PhaseName(Phase phase) {
  switch (phase) {
    case Phase::kElicit:
      return "elicit";
    case Phase::kRecommend:
      return "recommend";
    case Phase::kReengage:
      return "reengage";
    case Phase::kSocial:
      return "social";
    case Phase::kClosing:
      return "closing";
  }
  return "social";
}

std::optional<Phase> ParsePhase(std::string_view name) {
  for (Phase p : kAllPhases) {
    if (PhaseName(p) == name) return p;
  }
  return std::nullopt;
}

std::string JoinNames(const std::vector<std::string>& names) {
  std::string out;
  for (size_t i = 0; i < names.size(); ++i) {
    if (i > 0) out += (i + 1 == names.size()) ? " and " : ", ";
    out += names[i];
  }
  return out;
}

size_t TemplateGenerator::Variant(int turn, std::string_view key,
                                  size_t n) const {
  const uint64_t h =
      Mix(seed_ ^ Mix(static_cast<uint64_t>(turn) ^ Mix(Fnv1a(key))));
  return static_cast<size_t>(h % n);
}

Response TemplateGenerator::Generate(const GenerationInput& input) const {
  Response response;
  std::vector<std::string> sentences;
  auto pick = [&](std::string_view key, const auto& variants) {
    return std::string(variants[Variant(input.turn, key, variants.size())]);
  };

  const std::vector<Attribute> movies =
      input.delta.Of(AttributeKind::kMovieTitle, Label::kPos);
  const std::vector<Attribute> genres =
      input.delta.Of(AttributeKind::kGenre, Label::kPos);
  const std::vector<Attribute> persons =
      input.delta.Of(AttributeKind::kPerson, Label::kPos);
  std::vector<Attribute> negatives;
  for (const TrackingEntry& e : input.delta.entries) {
    if (e.label == Label::kNeg) negatives.push_back(e.attribute);
  }
  std::set<Attribute>& realized = response.realized;
  auto realize = [&realized](const std::vector<Attribute>& attrs) {
    realized.insert(attrs.begin(), attrs.end());
  };

  if (!negatives.empty()) {
    sentences.push_back(
        Fill(pick("contrast", kContrast), "{N}", JoinNames(Displays(negatives))));
    realize(negatives);
  }

  if (input.phase == Phase::kElicit && movies.empty()) {
    sentences.push_back(pick("elicit", kElicit));
  }
  if (input.phase == Phase::kReengage) {
    if (input.focus_genre) {
      sentences.push_back(Fill(pick("reengage_genre", kReengageGenre), "{G}",
                               input.focus_genre->display()));
      realized.insert(*input.focus_genre);
    } else {
      sentences.push_back(pick("reengage", kReengage));
    }
  }

  if (!movies.empty()) {
    const Attribute& movie = movies.front();
    // Persons the response may name alongside the movie: new ones from the
    // delta and ones the system already talks about.
    std::set<Attribute> cast;
    for (const Attribute& p : persons) {
      if (kb_->Holds(p, Predicate::kActedIn, movie)) cast.insert(p);
    }
    for (const auto& [a, label] : input.current_system.map()) {
      if (label == Label::kPos && a.kind() == AttributeKind::kPerson &&
          kb_->Holds(a, Predicate::kActedIn, movie)) {
        cast.insert(a);
      }
    }
    if (cast.size() >= 2) {
      std::vector<Attribute> names(cast.begin(), cast.end());
      sentences.push_back(Fill(
          Fill(pick("cast_link", kCastLink), "{P}", JoinNames(Displays(names))),
          "{M}", movie.display()));
      realize(names);
      realized.insert(movie);
    }
    if (input.phase == Phase::kRecommend && !realized.count(movie)) {
      if (!genres.empty()) {
        sentences.push_back(Fill(
            Fill(pick("recommend_genre", kRecommendGenre), "{G}",
                 JoinNames(Displays(genres))),
            "{M}", movie.display()));
        realize(genres);
      } else {
        sentences.push_back(
            Fill(pick("recommend", kRecommend), "{M}", movie.display()));
      }
      realized.insert(movie);
    } else if (!realized.count(movie)) {
      sentences.push_back(
          Fill(pick("mention", kMention), "{M}", movie.display()));
      realized.insert(movie);
    }
    if (movies.size() > 1) {
      std::vector<Attribute> rest(movies.begin() + 1, movies.end());
      sentences.push_back(Fill(pick("more_movies", kMoreMovies), "{M}",
                               JoinNames(Displays(rest))));
      realize(rest);
    }
  }

  for (const Attribute& p : persons) {
    if (realized.count(p)) continue;
    // Link the person to a movie the response or the system already names.
    std::optional<Attribute> acted, directed;
    auto consider = [&](const Attribute& m) {
      if (!acted && kb_->Holds(p, Predicate::kActedIn, m)) acted = m;
      if (!directed && kb_->Holds(p, Predicate::kDirected, m)) directed = m;
    };
    for (const Attribute& m : movies) consider(m);
    for (const auto& [a, label] : input.current_system.map()) {
      if (label == Label::kPos && a.kind() == AttributeKind::kMovieTitle) {
        consider(a);
      }
    }
    if (acted || directed) {
      const Attribute& m = acted ? *acted : *directed;
      sentences.push_back(Capitalized(
          Fill(Fill(acted ? pick("stars", kStars) : pick("directed", kDirected),
                    "{P}", p.display()),
               "{M}", m.display())));
      realized.insert(m);
    } else {
      sentences.push_back(
          Fill(pick("person_ask", kPersonAsk), "{P}", p.display()));
    }
    realized.insert(p);
  }

  std::vector<Attribute> loose_genres;
  for (const Attribute& g : genres) {
    if (!realized.count(g)) loose_genres.push_back(g);
  }
  if (!loose_genres.empty()) {
    sentences.push_back(Capitalized(Fill(pick("genre_social", kGenreSocial),
                                         "{G}",
                                         JoinNames(Displays(loose_genres)))));
    realize(loose_genres);
  }

  if (input.phase == Phase::kClosing) {
    sentences.push_back(pick("closing", kClosing));
  }
  if (sentences.empty()) sentences.push_back(pick("social", kSocial));

  for (size_t i = 0; i < sentences.size(); ++i) {
    if (i > 0) {
      const char last = response.text.back();
      if (last != '.' && last != '?' && last != '!') response.text += '.';
      response.text += ' ';
    }
    response.text += sentences[i];
  }
  return response;
}

bool VerifyRealization(std::string_view text, const AttributeDelta& delta,
                       const GenrePatternSet* patterns) {
  std::vector<std::string> words;
  for (const Token& t : Tokenize(text)) {
    if (!t.barrier) words.push_back(t.text);
  }
  auto occurs = [&words](const std::string& form) {
    std::vector<std::string> needle;
    for (const Token& t : Tokenize(form)) needle.push_back(t.text);
    if (needle.empty()) return false;
    return std::search(words.begin(), words.end(), needle.begin(),
                       needle.end()) != words.end();
  };
  for (const TrackingEntry& e : delta.entries) {
    if (e.label != Label::kPos) continue;
    const Attribute& a = e.attribute;
    std::vector<std::string> forms = {a.display(), a.id()};
    if (a.kind() == AttributeKind::kMovieTitle) {
      forms.push_back(Canonicalize(a.display(), /*strip_article=*/true));
    }
    if (a.kind() == AttributeKind::kGenre && patterns) {
      for (const auto& [alias, genre] : patterns->aliases()) {
        if (genre == a.id()) forms.push_back(alias);
      }
    }
    if (std::none_of(forms.begin(), forms.end(), occurs)) return false;
  }
  return true;
}

}  // namespace attrdial
