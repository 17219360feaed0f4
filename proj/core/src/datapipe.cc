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

#include "attrdial/datapipe.h"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>

#include "attrdial/errors.h"

namespace attrdial {
namespace {

void CheckEvents(const CorpusDialog& dialog) {
  int previous = 0;
  for (const CorpusEvent& e : dialog.recommendations) {
    if (e.turn < 1 || e.turn > static_cast<int>(dialog.turns.size())) {
      throw ValidationError("dialog " + dialog.id + ": recommendation turn " +
                            std::to_string(e.turn) + " out of range");
    }
    if (e.turn < previous) {
      throw ValidationError("dialog " + dialog.id +
                            ": recommendations out of order");
    }
    previous = e.turn;
  }
}

uint64_t Fnv1a(std::string_view s) {
  uint64_t h = 14695981039346656037ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

// Graph over the extracted turns plus the event titles.
std::set<Attribute> DialogAttributes(const std::vector<Turn>& turns,
                                     const std::vector<Attribute>& events) {
  std::set<Attribute> out(events.begin(), events.end());
  for (const Turn& t : turns) {
    for (const AttributeMention& m : t.mentions) out.insert(m.attribute);
  }
  return out;
}

class MonomorphismSearch {
 public:
  MonomorphismSearch(const RelationGraph& graph, const MovieKB& kb,
                     size_t limit)
      : graph_(graph), kb_(kb), limit_(limit) {
    const size_t n = graph.nodes.size();
    for (size_t i = 0; i < n; ++i) index_.emplace(graph.nodes[i], i);
    adjacent_.resize(n);
    for (const Relation& r : graph.edges) {
      const size_t s = index_.at(r.subject);
      const size_t o = index_.at(r.object);
      adjacent_[s].push_back({r.predicate, o, true});
      adjacent_[o].push_back({r.predicate, s, false});
    }
    // Most constrained first: prefer nodes tied to already placed ones, then
    // higher degree, then node order.
    std::vector<bool> placed(n, false);
    for (size_t step = 0; step < n; ++step) {
      size_t best = n;
      std::pair<int, size_t> best_key{-1, 0};
      for (size_t i = 0; i < n; ++i) {
        if (placed[i]) continue;
        int links = 0;
        for (const Link& l : adjacent_[i]) links += placed[l.other] ? 1 : 0;
        std::pair<int, size_t> key{links, adjacent_[i].size()};
        if (best == n || key > best_key) {
          best = i;
          best_key = key;
        }
      }
      placed[best] = true;
      order_.push_back(best);
    }
    image_.resize(n);
  }

  std::vector<AttributeMapping> Run() {
    Search(0);
    std::sort(found_.begin(), found_.end());
    std::vector<AttributeMapping> out;
    out.reserve(found_.size());
    for (const std::vector<Attribute>& images : found_) {
      AttributeMapping m;
      for (size_t i = 0; i < images.size(); ++i) {
        m.emplace(graph_.nodes[i], images[i]);
      }
      out.push_back(std::move(m));
    }
    return out;
  }

 private:
  struct Link {
    Predicate predicate;
    size_t other;
    bool outgoing;  // this node is the relation's subject
  };

  std::vector<Attribute> Candidates(size_t node) const {
    const Attribute& a = graph_.nodes[node];
    for (const Link& l : adjacent_[node]) {
      if (!assigned_.count(l.other)) continue;
      std::vector<Attribute> out;
      for (const Attribute& c :
           kb_.Neighbors(image_[l.other], l.predicate)) {
        if (c.kind() == a.kind()) out.push_back(c);
      }
      return out;
    }
    return kb_.AttributesOfKind(a.kind());
  }

  bool Consistent(size_t node, const Attribute& candidate) const {
    for (const Link& l : adjacent_[node]) {
      if (!assigned_.count(l.other)) continue;
      const Attribute& other = image_[l.other];
      const bool holds = l.outgoing
                             ? kb_.Holds(candidate, l.predicate, other)
                             : kb_.Holds(other, l.predicate, candidate);
      if (!holds) return false;
    }
    return true;
  }

  void Search(size_t depth) {
    if (found_.size() >= limit_) return;
    if (depth == order_.size()) {
      if (image_ != graph_.nodes) found_.push_back(image_);
      return;
    }
    const size_t node = order_[depth];
    for (const Attribute& c : Candidates(node)) {
      if (used_.count(c) || !Consistent(node, c)) continue;
      image_[node] = c;
      used_.insert(c);
      assigned_.insert(node);
      Search(depth + 1);
      assigned_.erase(node);
      used_.erase(c);
      if (found_.size() >= limit_) return;
    }
  }

  const RelationGraph& graph_;
  const MovieKB& kb_;
  size_t limit_;
  std::map<Attribute, size_t> index_;
  std::vector<std::vector<Link>> adjacent_;
  std::vector<size_t> order_;
  std::vector<Attribute> image_;
  std::set<size_t> assigned_;
  std::set<Attribute> used_;
  std::vector<std::vector<Attribute>> found_;
};

}  // namespace

CorpusDialog DialogFromJson(const Json& j, const AttributeRegistry& registry) {
  CorpusDialog d;
  d.id = RequireString(j, "id");
  for (const Json& t : RequireArray(j, "turns")) {
    const std::string speaker = RequireString(t, "speaker");
    auto side = ParseSide(speaker);
    if (!side) throw ParseError("unknown speaker \"" + speaker + "\"");
    Turn turn;
    turn.speaker = *side;
    turn.text = RequireString(t, "text");
    d.turns.push_back(std::move(turn));
  }
  for (const Json& e : RequireArray(j, "recommendations")) {
    d.recommendations.push_back({static_cast<int>(RequireInt(e, "turn")),
                                 RequireString(e, "title")});
  }
  CheckEvents(d);
  if (j.contains("gold")) {
    std::vector<TurnTrackings> gold;
    for (const Json& g : RequireArray(j, "gold")) {
      TurnTrackings t;
      t.user = TrackingFromJson(RequireField(g, "user"), registry);
      t.system = TrackingFromJson(RequireField(g, "system"), registry);
      gold.push_back(std::move(t));
    }
    if (!gold.empty() && gold.size() != d.turns.size()) {
      throw ValidationError("dialog " + d.id + ": gold has " +
                            std::to_string(gold.size()) + " entries for " +
                            std::to_string(d.turns.size()) + " turns");
    }
    d.gold = std::move(gold);
  }
  return d;
}

Json DialogToJson(const CorpusDialog& dialog) {
  Json j = Json::object();
  j["id"] = dialog.id;
  Json turns = Json::array();
  for (const Turn& t : dialog.turns) {
    Json turn = Json::object();
    turn["speaker"] = SideName(t.speaker);
    turn["text"] = t.text;
    turns.push_back(std::move(turn));
  }
  j["turns"] = std::move(turns);
  Json events = Json::array();
  for (const CorpusEvent& e : dialog.recommendations) {
    Json event = Json::object();
    event["turn"] = e.turn;
    event["title"] = e.title;
    events.push_back(std::move(event));
  }
  j["recommendations"] = std::move(events);
  if (dialog.gold) {
    Json gold = Json::array();
    for (const TurnTrackings& t : *dialog.gold) {
      Json g = Json::object();
      g["user"] = TrackingToJson(t.user);
      g["system"] = TrackingToJson(t.system);
      gold.push_back(std::move(g));
    }
    j["gold"] = std::move(gold);
  }
  return j;
}

std::vector<CorpusDialog> LoadCorpus(std::istream& in,
                                     const AttributeRegistry& registry) {
  std::vector<CorpusDialog> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(DialogFromJson(ParseJson(line), registry));
    } catch (const ParseError& e) {
      throw ParseError("corpus line " + std::to_string(line_no) + ": " +
                       e.what());
    } catch (const ValidationError& e) {
      throw ValidationError("corpus line " + std::to_string(line_no) + ": " +
                            e.what());
    }
  }
  return out;
}

std::vector<CorpusDialog> LoadCorpusFile(const std::string& path,
                                         const AttributeRegistry& registry) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open corpus file " + path);
  return LoadCorpus(in, registry);
}

void WriteCorpus(std::ostream& out, const std::vector<CorpusDialog>& corpus) {
  for (const CorpusDialog& d : corpus) out << DialogToJson(d).dump() << '\n';
}

std::vector<Turn> ExtractTurns(const CorpusDialog& dialog,
                               const MentionExtractor& extractor) {
  std::vector<Turn> out = dialog.turns;
  for (Turn& t : out) t.mentions = extractor.Extract(t.text, t.speaker);
  return out;
}

std::vector<Attribute> ResolveEvents(const CorpusDialog& dialog,
                                     const MentionExtractor& extractor) {
  std::vector<Attribute> out;
  for (const CorpusEvent& e : dialog.recommendations) {
    auto a = extractor.Resolve(e.title);
    if (!a || a->kind() != AttributeKind::kMovieTitle) {
      throw ValidationError("dialog " + dialog.id + ": \"" + e.title +
                            "\" is not a movie in the knowledge base");
    }
    out.push_back(*a);
  }
  return out;
}

Annotation Annotate(const CorpusDialog& dialog,
                    const MentionExtractor& extractor) {
  CheckEvents(dialog);
  Annotation result;
  if (dialog.recommendations.empty()) {
    result.diagnostic =
        "dialog " + dialog.id + ": no recommendations, annotation skipped";
    return result;
  }
  const std::vector<Attribute> events = ResolveEvents(dialog, extractor);
  const std::vector<Turn> turns = ExtractTurns(dialog, extractor);
  const MovieKB& kb = extractor.kb();

  std::set<Attribute> seen_user;
  std::set<Attribute> seen_system;
  size_t next_event = 0;
  for (size_t i = 0; i < turns.size(); ++i) {
    const int turn = static_cast<int>(i) + 1;
    std::set<Attribute>& seen =
        turns[i].speaker == Side::kUser ? seen_user : seen_system;
    for (const AttributeMention& m : turns[i].mentions) seen.insert(m.attribute);
    for (size_t e = 0; e < events.size(); ++e) {
      if (dialog.recommendations[e].turn == turn) seen_system.insert(events[e]);
    }
    while (next_event + 1 < events.size() &&
           dialog.recommendations[next_event].turn < turn) {
      ++next_event;
    }
    const Attribute& governing = events[next_event];
    auto label = [&](const Attribute& a) {
      return a == governing || kb.Related(a, governing) ? Label::kPos
                                                        : Label::kNeg;
    };
    TurnTrackings t{AttributeTracking(Side::kUser, turn),
                    AttributeTracking(Side::kSystem, turn)};
    for (const Attribute& a : seen_user) t.user.Set(a, label(a));
    for (const Attribute& a : seen_system) t.system.Set(a, label(a));
    result.gold.push_back(std::move(t));
  }
  return result;
}

RelationGraph BuildRelationGraph(const std::set<Attribute>& attributes,
                                 const MovieKB& kb) {
  RelationGraph g;
  g.nodes.assign(attributes.begin(), attributes.end());
  for (const Relation& r : kb.relations()) {
    if (attributes.count(r.subject) && attributes.count(r.object)) {
      g.edges.push_back(r);
    }
  }
  return g;
}

RelationGraph BuildRelationGraph(const CorpusDialog& dialog,
                                 const MentionExtractor& extractor) {
  return BuildRelationGraph(
      DialogAttributes(ExtractTurns(dialog, extractor),
                       ResolveEvents(dialog, extractor)),
      extractor.kb());
}

std::vector<AttributeMapping> FindMonomorphisms(const RelationGraph& graph,
                                                const MovieKB& kb,
                                                size_t limit) {
  if (graph.nodes.empty()) return {};
  return MonomorphismSearch(graph, kb, limit).Run();
}

CorpusDialog ApplyMapping(const CorpusDialog& dialog,
                          const std::vector<Turn>& extracted,
                          const std::vector<Attribute>& events,
                          const AttributeMapping& mapping,
                          const std::string& new_id) {
  auto image = [&](const Attribute& a) -> const Attribute& {
    auto it = mapping.find(a);
    return it == mapping.end() ? a : it->second;
  };
  CorpusDialog out;
  out.id = new_id;
  for (const Turn& t : extracted) {
    Turn turn;
    turn.speaker = t.speaker;
    size_t pos = 0;
    for (const AttributeMention& m : t.mentions) {
      turn.text.append(t.text, pos, m.begin - pos);
      const Attribute& target = image(m.attribute);
      turn.text += target == m.attribute ? t.text.substr(m.begin, m.end - m.begin)
                                         : target.display();
      pos = m.end;
    }
    turn.text.append(t.text, pos);
    out.turns.push_back(std::move(turn));
  }
  for (size_t e = 0; e < dialog.recommendations.size(); ++e) {
    CorpusEvent event = dialog.recommendations[e];
    const Attribute& target = image(events[e]);
    if (target != events[e]) event.title = target.display();
    out.recommendations.push_back(std::move(event));
  }
  return out;
}

AugmentResult Augment(const CorpusDialog& dialog,
                      const MentionExtractor& extractor,
                      const AugmentOptions& options) {
  if (options.multiplier < 0) {
    throw ValidationError("multiplier must not be negative");
  }
  AugmentResult result;
  if (options.multiplier == 0) return result;
  CheckEvents(dialog);
  const std::vector<Turn> turns = ExtractTurns(dialog, extractor);
  const std::vector<Attribute> events = ResolveEvents(dialog, extractor);
  const RelationGraph graph =
      BuildRelationGraph(DialogAttributes(turns, events), extractor.kb());
  std::vector<AttributeMapping> mappings =
      FindMonomorphisms(graph, extractor.kb(), options.search_limit);
  result.mappings_found = mappings.size();

  // Fisher-Yates with an explicit draw so the order is the same on every
  // standard library.
  std::mt19937_64 rng(options.seed ^ Fnv1a(dialog.id));
  for (size_t i = mappings.size(); i > 1; --i) {
    std::swap(mappings[i - 1], mappings[rng() % i]);
  }

  const size_t want = static_cast<size_t>(options.multiplier);
  for (const AttributeMapping& m : mappings) {
    if (result.dialogs.size() == want) break;
    CorpusDialog candidate = ApplyMapping(
        dialog, turns, events, m,
        dialog.id + "-aug" + std::to_string(result.dialogs.size() + 1));
    if (!ValidateAugmentation(dialog, candidate, extractor)) {
      ++result.rejected;
      continue;
    }
    result.dialogs.push_back(std::move(candidate));
  }
  if (result.dialogs.size() < want) {
    result.diagnostic = "dialog " + dialog.id + ": " +
                        std::to_string(result.dialogs.size()) + " of " +
                        std::to_string(want) + " substitutions available";
  } else if (mappings.size() >= options.search_limit) {
    result.diagnostic = "dialog " + dialog.id + ": search stopped at " +
                        std::to_string(options.search_limit) + " mappings";
  }
  return result;
}

bool ValidateAugmentation(const CorpusDialog& original,
                          const CorpusDialog& substituted,
                          const MentionExtractor& extractor,
                          std::string* why) {
  auto fail = [why](std::string reason) {
    if (why) *why = std::move(reason);
    return false;
  };
  if (original.turns.size() != substituted.turns.size()) {
    return fail("turn counts differ");
  }
  if (original.recommendations.size() != substituted.recommendations.size()) {
    return fail("recommendation counts differ");
  }
  std::vector<Attribute> events_a;
  std::vector<Attribute> events_b;
  try {
    events_a = ResolveEvents(original, extractor);
    events_b = ResolveEvents(substituted, extractor);
  } catch (const ValidationError& e) {
    return fail(e.what());
  }
  const std::vector<Turn> a = ExtractTurns(original, extractor);
  const std::vector<Turn> b = ExtractTurns(substituted, extractor);

  AttributeMapping forward;
  std::map<Attribute, Attribute> backward;
  auto pair_up = [&](const Attribute& x, const Attribute& y) {
    if (x.kind() != y.kind()) return false;
    auto [f, f_new] = forward.emplace(x, y);
    auto [r, r_new] = backward.emplace(y, x);
    return f->second == y && r->second == x;
  };
  for (size_t i = 0; i < a.size(); ++i) {
    const Turn& ta = a[i];
    const Turn& tb = b[i];
    if (ta.speaker != tb.speaker) return fail("speakers differ");
    if (ta.mentions.size() != tb.mentions.size()) {
      return fail("turn " + std::to_string(i + 1) +
                  ": mention counts differ");
    }
    size_t pa = 0;
    size_t pb = 0;
    for (size_t k = 0; k < ta.mentions.size(); ++k) {
      const AttributeMention& ma = ta.mentions[k];
      const AttributeMention& mb = tb.mentions[k];
      if (ta.text.compare(pa, ma.begin - pa, tb.text, pb, mb.begin - pb) != 0) {
        return fail("turn " + std::to_string(i + 1) +
                    ": text outside mentions changed");
      }
      if (!pair_up(ma.attribute, mb.attribute)) {
        return fail("turn " + std::to_string(i + 1) +
                    ": mentions do not align");
      }
      pa = ma.end;
      pb = mb.end;
    }
    if (ta.text.compare(pa, std::string::npos, tb.text, pb,
                        std::string::npos) != 0) {
      return fail("turn " + std::to_string(i + 1) +
                  ": text outside mentions changed");
    }
  }
  for (size_t e = 0; e < events_a.size(); ++e) {
    if (original.recommendations[e].turn != substituted.recommendations[e].turn) {
      return fail("recommendation turns differ");
    }
    if (!pair_up(events_a[e], events_b[e])) {
      return fail("recommendations do not align");
    }
  }
  bool identity = true;
  for (const auto& [x, y] : forward) identity = identity && x == y;
  if (identity) return fail("identity substitution");

  const MovieKB& kb = extractor.kb();
  const RelationGraph ga = BuildRelationGraph(DialogAttributes(a, events_a), kb);
  const RelationGraph gb = BuildRelationGraph(DialogAttributes(b, events_b), kb);
  for (const Relation& r : ga.edges) {
    const Relation image{forward.at(r.subject), r.predicate,
                         forward.at(r.object)};
    if (!std::binary_search(gb.edges.begin(), gb.edges.end(), image)) {
      return fail("relation " + DebugString(r.subject) + " " +
                  std::string(PredicateName(r.predicate)) + " " +
                  DebugString(r.object) + " is not preserved");
    }
  }
  return true;
}

}  // namespace attrdial
