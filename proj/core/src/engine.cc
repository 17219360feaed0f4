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

#include "attrdial/engine.h"

#include <algorithm>

#include "attrdial/errors.h"
#include "attrdial/text.h"

namespace attrdial {
namespace {

std::set<Attribute> RejectedTitles(std::span<const RecommendationRecord> log) {
  std::set<Attribute> out;
  for (const RecommendationRecord& r : log) {
    if (r.status == RecommendationStatus::kRejected) out.insert(r.title);
  }
  return out;
}

std::string PlainContext(std::span<const Turn> turns) {
  std::string out;
  for (const Turn& t : turns) {
    if (!out.empty()) out += '\n';
    out += RenderContextLine(t.speaker, t.text);
  }
  return out;
}

bool IsBlank(std::string_view text) {
  return std::all_of(text.begin(), text.end(), [](char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r';
  });
}

Json DecisionsToJson(const std::vector<LabelerDecision>& decisions) {
  Json out = Json::array();
  for (const LabelerDecision& d : decisions) {
    Json j = Json::object();
    j["kind"] = KindName(d.attribute.kind());
    j["id"] = d.attribute.id();
    j["label"] = LabelName(d.label);
    j["rationale"] = RationaleName(d.rationale);
    out.push_back(std::move(j));
  }
  return out;
}

std::vector<LabelerDecision> DecisionsFromJson(
    const Json& j, const AttributeRegistry& registry) {
  std::vector<LabelerDecision> out;
  if (!j.is_array()) throw ParseError("decisions must be an array");
  for (const Json& d : j) {
    auto kind = ParseKind(RequireString(d, "kind"));
    auto label = ParseLabel(RequireString(d, "label"));
    auto rationale = ParseRationale(RequireString(d, "rationale"));
    if (!kind || !label || !rationale) throw ParseError("malformed decision");
    out.push_back(
        {registry.Resolve(*kind, RequireString(d, "id")), *label, *rationale});
  }
  return out;
}

StepRecord StepRecordFromJson(const Json& j,
                              const AttributeRegistry& registry) {
  StepRecord r;
  r.user_turn = static_cast<int>(RequireInt(j, "user_turn"));
  r.system_turn = static_cast<int>(RequireInt(j, "system_turn"));
  r.decisions = DecisionsFromJson(RequireField(j, "decisions"), registry);
  r.system_decisions =
      DecisionsFromJson(RequireField(j, "system_decisions"), registry);
  r.state = PolicyStateFromJson(RequireField(j, "state"));
  for (const Json& p : RequireArray(j, "positive_placeholders")) {
    auto parsed = p.is_string() ? Placeholder::Parse(p.get<std::string>())
                                : std::nullopt;
    if (!parsed) throw ParseError("malformed positive placeholder");
    r.positive_placeholders.push_back(*parsed);
  }
  r.prediction =
      PlaceholderEntriesFromJson(RequireField(j, "prediction"), r.system_turn);
  r.relexicalized = TrackingFromJson(RequireField(j, "relexicalized"), registry);
  for (const Json& k : RequireArray(j, "unfilled")) {
    auto kind = k.is_string() ? ParseKind(k.get<std::string>()) : std::nullopt;
    if (!kind) throw ParseError("malformed unfilled kind");
    r.unfilled.push_back(*kind);
  }
  r.delta = DeltaFromJson(RequireField(j, "delta"));
  auto phase = ParsePhase(RequireString(j, "phase"));
  if (!phase) throw ParseError("unknown phase");
  r.phase = *phase;
  r.generator = RequireString(j, "generator");
  r.predictor_failed = RequireBool(j, "predictor_failed");
  r.labeler_failed = RequireBool(j, "labeler_failed");
  for (const Json& v : RequireArray(j, "violations")) {
    if (!v.is_string()) throw ParseError("violations must be strings");
    r.violations.push_back(v.get<std::string>());
  }
  return r;
}

}  // namespace

void ValidateSessionConfig(const SessionConfig& config) {
  if (config.max_history_tokens <= 0) {
    throw ValidationError("max_history_tokens must be positive");
  }
  if (config.labeler_context_tokens <= 0) {
    throw ValidationError("labeler_context_tokens must be positive");
  }
}

TurnTrackings DialogSession::Current() const {
  if (!trackings.empty()) return trackings.back();
  return {AttributeTracking(Side::kUser, 0), AttributeTracking(Side::kSystem, 0)};
}

std::span<const Turn> TruncateContext(std::span<const Turn> turns,
                                      size_t limit) {
  if (turns.empty()) return turns;
  size_t first = turns.size() - 1;
  while (first > 0 && turns[first].speaker != Side::kUser) --first;
  if (turns[first].speaker != Side::kUser) first = turns.size() - 1;
  size_t words = 0;
  for (size_t k = first; k < turns.size(); ++k) {
    words += CountWords(turns[k].text);
  }
  while (first > 0) {
    const size_t more = CountWords(turns[first - 1].text);
    if (words + more > limit) break;
    words += more;
    --first;
  }
  return turns.subspan(first);
}

Engine::Engine(const MovieKB& kb, const GenrePatternSet& patterns,
               EngineBackends backends)
    : kb_(&kb),
      patterns_(&patterns),
      extractor_(kb, patterns),
      backends_(backends),
      kb_recommender_(kb) {}

DialogSession Engine::NewSession(std::string id, SessionConfig config) const {
  ValidateSessionConfig(config);
  DialogSession session;
  session.id = std::move(id);
  session.config = config;
  return session;
}

Turn Engine::MakeTurn(Side speaker, std::string_view text) const {
  return Turn{speaker, std::string(text), extractor_.Extract(text, speaker)};
}

void Engine::AppendTurn(DialogSession& session, Turn turn) const {
  for (const AttributeMention& m : turn.mentions) session.map.Assign(m.attribute);
  session.turns.push_back(std::move(turn));
}

TrackResult Engine::TrackLatest(const DialogSession& session,
                                StepRecord& record) const {
  const std::span<const Turn> all(session.turns);
  const std::span<const Turn> context = TruncateContext(
      all, static_cast<size_t>(session.config.labeler_context_tokens));
  const std::set<Attribute> e_user = CollectSideAttributes(all, Side::kUser);
  const std::set<Attribute> e_system = CollectSideAttributes(all, Side::kSystem);
  const int turn = session.turn_count();
  if (backends_.labeler) {
    try {
      return Track(context, turn, e_user, e_system, *backends_.labeler);
    } catch (const Error&) {
      record.labeler_failed = true;
    }
  }
  return Track(context, turn, e_user, e_system, reference_labeler_);
}

StepResult Engine::Step(DialogSession& session,
                        std::string_view user_text) const {
  if (session.closed) {
    throw SessionClosedError("session " + session.id + " is closed");
  }
  if (IsBlank(user_text)) throw ValidationError("message text is empty");

  StepRecord record;
  AppendTurn(session, MakeTurn(Side::kUser, user_text));
  record.user_turn = session.turn_count();
  const RecommendationRecord* changed =
      ApplyUserReaction(session.recommendations, user_text);

  TrackResult tracked = TrackLatest(session, record);
  record.decisions = std::move(tracked.decisions);
  session.trackings.push_back(std::move(tracked.trackings));
  if (changed && changed->status == RecommendationStatus::kRejected) {
    LabelFlipOnRejection(session.trackings, changed->title, record.user_turn);
  }

  StepResult result;
  Respond(session, std::move(record), result);
  return result;
}

StepResult Engine::Greet(DialogSession& session) const {
  if (session.closed) {
    throw SessionClosedError("session " + session.id + " is closed");
  }
  if (!session.turns.empty()) {
    throw ValidationError("the system can only open an empty session");
  }
  StepResult result;
  Respond(session, StepRecord{}, result);
  return result;
}

void Engine::Respond(DialogSession& session, StepRecord record,
                     StepResult& result) const {
  const TurnTrackings current = session.Current();
  const int turn = session.turn_count();
  const std::span<const Turn> all(session.turns);

  const PolicyState state =
      SummarizeState(all, current, session.recommendations);
  const std::span<const Turn> context = TruncateContext(
      all, static_cast<size_t>(session.config.max_history_tokens));
  const PredictorInput input =
      BuildPredictorInput(context, current, turn, state, session.map);
  record.state = state;
  record.positive_placeholders = input.positive_placeholders;

  PredictedTracking prediction(turn + 1);
  try {
    prediction = Predict(input, backends_.predictor ? *backends_.predictor
                                                    : reference_policy_);
  } catch (const Error&) {
    record.predictor_failed = true;
  }
  // A rejected title is never brought back, whatever the predictor says.
  const std::set<Attribute> rejected = RejectedTitles(session.recommendations);
  std::vector<Placeholder> drop;
  for (const auto& [p, label] : prediction.entries()) {
    const Attribute* a = session.map.Find(p);
    if (a && rejected.count(*a)) drop.push_back(p);
  }
  for (const Placeholder& p : drop) prediction.Erase(p);
  record.prediction = prediction;

  AttributeTracking relexicalized;
  try {
    relexicalized = RelexicalizeLenient(
        prediction, session.map,
        backends_.recommender ? *backends_.recommender : kb_recommender_,
        current, turn + 1, &record.unfilled);
  } catch (const Error&) {
    record.unfilled.clear();
    relexicalized = RelexicalizeLenient(prediction, session.map,
                                        kb_recommender_, current, turn + 1,
                                        &record.unfilled);
  }
  for (const Attribute& a : rejected) relexicalized.Erase(a);
  record.relexicalized = relexicalized;
  record.delta = ComputeDelta(relexicalized, current.system);

  const std::optional<RecommendationStatus> live =
      session.recommendations.empty()
          ? std::nullopt
          : std::optional(session.recommendations.back().status);
  const int positives =
      state.positive_titles + state.positive_genres + state.positive_persons;
  if (record.delta.Has(AttributeKind::kMovieTitle, Label::kPos)) {
    record.phase = Phase::kRecommend;
  } else if (state.closing || live == RecommendationStatus::kAccepted) {
    record.phase = Phase::kClosing;
  } else if (live == RecommendationStatus::kRejected) {
    record.phase = Phase::kReengage;
  } else if (positives == 0) {
    record.phase = Phase::kElicit;
  } else {
    record.phase = Phase::kSocial;
  }

  GenerationInput gin;
  gin.turn = turn + 1;
  gin.context = PlainContext(context);
  gin.delta = record.delta;
  gin.phase = record.phase;
  gin.current_system = current.system;
  if (record.phase == Phase::kReengage) {
    // Steer back to a liked genre of the rejected title that the system
    // side already talks about (or is about to).
    const Attribute& title = session.recommendations.back().title;
    std::set<Attribute> speakable = current.system.WithLabel(Label::kPos);
    for (const Attribute& g : record.delta.Of(AttributeKind::kGenre, Label::kPos)) {
      speakable.insert(g);
    }
    for (const Attribute& g : speakable) {
      if (g.kind() == AttributeKind::kGenre &&
          kb_->Holds(title, Predicate::kHasGenre, g)) {
        gin.focus_genre = g;
        break;
      }
    }
  }

  Generated generated = GenerateText(session, gin, input.context);
  record.generator = generated.source;

  AppendTurn(session, MakeTurn(Side::kSystem, generated.response.text));
  record.system_turn = session.turn_count();
  TrackResult tracked = TrackLatest(session, record);
  record.system_decisions = std::move(tracked.decisions);
  session.trackings.push_back(std::move(tracked.trackings));

  for (const Attribute& m :
       record.delta.Of(AttributeKind::kMovieTitle, Label::kPos)) {
    const bool spoken = std::any_of(
        session.turns.back().mentions.begin(),
        session.turns.back().mentions.end(),
        [&m](const AttributeMention& x) { return x.attribute == m; });
    if (spoken) {
      session.recommendations.push_back(
          {record.system_turn, m, RecommendationStatus::kOffered});
    }
  }

  record.violations = CheckInvariants(session, record, generated.response);
  if (state.closing) session.closed = true;

  session.steps.push_back(std::move(record));
  result.response = std::move(generated.response);
  result.record = &session.steps.back();
}

Engine::Generated Engine::GenerateText(DialogSession& session,
                                       const GenerationInput& input,
                                       const std::string& delex_context) const {
  const TemplateGenerator templates(*kb_, session.config.template_seed);
  if (!backends_.text_generator) {
    return {templates.Generate(input), "template"};
  }

  TextGenerationRequest request;
  request.context = delex_context;
  request.phase = input.phase;
  for (const TrackingEntry& e : input.delta.entries) {
    request.delta.emplace_back(session.map.Assign(e.attribute), e.label);
  }
  std::set<Attribute> allowed = input.current_system.Attributes();
  for (const TrackingEntry& e : input.delta.entries) allowed.insert(e.attribute);
  const std::set<Attribute> rejected = RejectedTitles(session.recommendations);

  for (int attempt = 0; attempt < 2; ++attempt) {
    std::string raw;
    try {
      raw = backends_.text_generator->Complete(request);
    } catch (const Error&) {
      continue;
    }
    // Relexicalize echoed placeholders; NEW or unknown ones make the
    // response unusable.
    std::string text;
    bool ok = true;
    size_t cursor = 0;
    while (ok && cursor < raw.size()) {
      const size_t open = raw.find('[', cursor);
      if (open == std::string::npos) break;
      const size_t close = raw.find(']', open);
      if (close == std::string::npos) break;
      auto p = Placeholder::Parse(std::string_view(raw).substr(open, close - open + 1));
      text.append(raw, cursor, open - cursor);
      if (!p) {
        text.push_back('[');
        cursor = open + 1;
        continue;
      }
      const Attribute* a = session.map.Find(*p);
      if (!a) {
        ok = false;
        break;
      }
      text += a->display();
      cursor = close + 1;
    }
    if (!ok) continue;
    text.append(raw, std::min(cursor, raw.size()), std::string::npos);
    if (IsBlank(text) || !VerifyRealization(text, input.delta, patterns_)) {
      continue;
    }
    Response response;
    response.text = std::move(text);
    for (const AttributeMention& m : extractor_.Extract(response.text)) {
      response.realized.insert(m.attribute);
    }
    const bool contained =
        std::all_of(response.realized.begin(), response.realized.end(),
                    [&](const Attribute& a) {
                      return allowed.count(a) > 0 && !rejected.count(a);
                    });
    if (!contained) continue;
    return {std::move(response), "remote"};
  }
  return {templates.Generate(input), "template_fallback"};
}

std::vector<std::string> Engine::CheckInvariants(const DialogSession& session,
                                                 const StepRecord& record,
                                                 const Response& response) const {
  std::vector<std::string> violations;
  for (int k : {record.user_turn, record.system_turn}) {
    if (k <= 0) continue;
    const std::span<const Turn> prefix(session.turns.data(),
                                       static_cast<size_t>(k));
    const TurnTrackings& t = session.trackings[k - 1];
    if (t.user.Attributes() != CollectSideAttributes(prefix, Side::kUser) ||
        t.system.Attributes() != CollectSideAttributes(prefix, Side::kSystem)) {
      violations.push_back("tracking totality fails at turn " +
                           std::to_string(k));
    }
  }
  const AttributeTracking current =
      record.user_turn > 0 ? session.trackings[record.user_turn - 1].system
                           : AttributeTracking(Side::kSystem, 0);
  for (const TrackingEntry& e : record.delta.entries) {
    if (current.LabelOf(e.attribute) == e.label) {
      violations.push_back("delta entry " + DebugString(e.attribute) +
                           " already in the current system tracking");
    }
  }
  if (!VerifyRealization(response.text, record.delta, patterns_)) {
    violations.push_back("response does not realize the positive delta");
  }
  for (const Attribute& a : response.realized) {
    const bool in_delta = std::any_of(
        record.delta.entries.begin(), record.delta.entries.end(),
        [&a](const TrackingEntry& e) { return e.attribute == a; });
    if (!in_delta && !current.Contains(a)) {
      violations.push_back("response surfaces " + DebugString(a) +
                           " outside the delta and system tracking");
    }
  }
  const std::set<Attribute> rejected = RejectedTitles(session.recommendations);
  for (const AttributeMention& m : session.turns.back().mentions) {
    if (rejected.count(m.attribute)) {
      violations.push_back("response repeats rejected title " +
                           DebugString(m.attribute));
    }
  }
  return violations;
}

Json StepRecordToJson(const StepRecord& r) {
  Json j = Json::object();
  j["user_turn"] = r.user_turn;
  j["system_turn"] = r.system_turn;
  j["decisions"] = DecisionsToJson(r.decisions);
  j["system_decisions"] = DecisionsToJson(r.system_decisions);
  j["state"] = PolicyStateToJson(r.state);
  Json positives = Json::array();
  for (const Placeholder& p : r.positive_placeholders) {
    positives.push_back(p.Render());
  }
  j["positive_placeholders"] = std::move(positives);
  j["prediction"] = PlaceholderEntriesToJson(r.prediction);
  j["relexicalized"] = TrackingToJson(r.relexicalized);
  Json unfilled = Json::array();
  for (AttributeKind k : r.unfilled) unfilled.push_back(KindName(k));
  j["unfilled"] = std::move(unfilled);
  j["delta"] = DeltaToJson(r.delta);
  j["phase"] = PhaseName(r.phase);
  j["generator"] = r.generator;
  j["predictor_failed"] = r.predictor_failed;
  j["labeler_failed"] = r.labeler_failed;
  j["violations"] = r.violations;
  return j;
}

Json RecommendationsToJson(std::span<const RecommendationRecord> log) {
  Json out = Json::array();
  for (const RecommendationRecord& r : log) {
    Json j = Json::object();
    j["turn"] = r.turn;
    j["title"] = AttributeToJson(r.title);
    j["status"] = StatusName(r.status);
    out.push_back(std::move(j));
  }
  return out;
}

Json Engine::SessionState(const DialogSession& session) const {
  Json j = Json::object();
  j["id"] = session.id;
  Json config = Json::object();
  config["template_seed"] = session.config.template_seed;
  config["max_history_tokens"] = session.config.max_history_tokens;
  config["labeler_context_tokens"] = session.config.labeler_context_tokens;
  j["config"] = std::move(config);
  j["closed"] = session.closed;

  Json turns = Json::array();
  for (size_t i = 0; i < session.turns.size(); ++i) {
    const Turn& t = session.turns[i];
    Json tj = Json::object();
    tj["index"] = i + 1;
    tj["speaker"] = SideName(t.speaker);
    tj["text"] = t.text;
    Json mentions = Json::array();
    for (const AttributeMention& m : t.mentions) {
      Json mj = AttributeToJson(m.attribute);
      mj["start"] = m.begin;
      mj["end"] = m.end;
      mentions.push_back(std::move(mj));
    }
    tj["mentions"] = std::move(mentions);
    turns.push_back(std::move(tj));
  }
  j["turns"] = std::move(turns);

  Json trackings = Json::array();
  for (const TurnTrackings& t : session.trackings) {
    Json tj = Json::object();
    tj["user"] = TrackingToJson(t.user);
    tj["system"] = TrackingToJson(t.system);
    trackings.push_back(std::move(tj));
  }
  j["trackings"] = std::move(trackings);

  Json placeholders = Json::array();
  for (const auto& [p, a] : session.map.Entries()) {
    Json pj = Json::object();
    pj["placeholder"] = p.Render();
    pj["kind"] = KindName(a.kind());
    pj["id"] = a.id();
    pj["display"] = a.display();
    placeholders.push_back(std::move(pj));
  }
  j["placeholders"] = std::move(placeholders);
  j["recommendations"] = RecommendationsToJson(session.recommendations);

  Json steps = Json::array();
  for (const StepRecord& r : session.steps) steps.push_back(StepRecordToJson(r));
  j["steps"] = std::move(steps);
  return j;
}

DialogSession Engine::LoadSession(const Json& j) const {
  DialogSession session;
  session.id = RequireString(j, "id");
  const Json& config = RequireField(j, "config");
  const Json& seed = RequireField(config, "template_seed");
  if (!seed.is_number_unsigned() && !seed.is_number_integer()) {
    throw ParseError("template_seed must be an integer");
  }
  session.config.template_seed = seed.get<uint64_t>();
  session.config.max_history_tokens =
      static_cast<int>(RequireInt(config, "max_history_tokens"));
  session.config.labeler_context_tokens =
      static_cast<int>(RequireInt(config, "labeler_context_tokens"));
  ValidateSessionConfig(session.config);
  session.closed = RequireBool(j, "closed");

  AttributeRegistry registry;
  for (const Json& tj : RequireArray(j, "turns")) {
    auto side = ParseSide(RequireString(tj, "speaker"));
    if (!side) throw ParseError("unknown speaker");
    Turn turn{*side, RequireString(tj, "text"), {}};
    for (const Json& mj : RequireArray(tj, "mentions")) {
      AttributeMention m;
      m.attribute = AttributeFromJson(mj);
      m.begin = static_cast<size_t>(RequireInt(mj, "start"));
      m.end = static_cast<size_t>(RequireInt(mj, "end"));
      m.side = *side;
      if (m.begin >= m.end || m.end > turn.text.size()) {
        throw ParseError("mention span outside its turn");
      }
      registry.Add(m.attribute);
      turn.mentions.push_back(std::move(m));
    }
    session.turns.push_back(std::move(turn));
  }
  for (const Json& pj : RequireArray(j, "placeholders")) {
    const Attribute a = AttributeFromJson(pj);
    registry.Add(a);
    if (session.map.Assign(a).Render() != RequireString(pj, "placeholder")) {
      throw ParseError("placeholder table is not contiguous");
    }
  }
  for (const Json& rj : RequireArray(j, "recommendations")) {
    RecommendationRecord r;
    r.turn = static_cast<int>(RequireInt(rj, "turn"));
    r.title = AttributeFromJson(RequireField(rj, "title"));
    auto status = ParseStatus(RequireString(rj, "status"));
    if (!status) throw ParseError("unknown recommendation status");
    r.status = *status;
    registry.Add(r.title);
    session.recommendations.push_back(std::move(r));
  }
  for (const Json& sj : RequireArray(j, "steps")) {
    for (const TrackingEntry& e : DeltaFromJson(RequireField(sj, "delta")).entries) {
      registry.Add(e.attribute);
    }
  }
  for (const Json& tj : RequireArray(j, "trackings")) {
    session.trackings.push_back(
        {TrackingFromJson(RequireField(tj, "user"), registry),
         TrackingFromJson(RequireField(tj, "system"), registry)});
  }
  if (session.trackings.size() != session.turns.size()) {
    throw ParseError("snapshot needs one tracking pair per turn");
  }
  for (const Json& sj : RequireArray(j, "steps")) {
    session.steps.push_back(StepRecordFromJson(sj, registry));
  }
  return session;
}

}  // namespace attrdial
