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

#include "attrdial/service.h"

#include <httplib.h>

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace attrdial {
namespace {

int ParseIntValue(std::string_view name, const std::string& text) {
  int value = 0;
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || end != text.data() + text.size()) {
    throw ValidationError(std::string(name) + " must be an integer, got \"" +
                          text + "\"");
  }
  return value;
}

uint64_t ParseSeedValue(std::string_view name, const std::string& text) {
  uint64_t value = 0;
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || end != text.data() + text.size()) {
    throw ValidationError(std::string(name) +
                          " must be a non-negative integer, got \"" + text +
                          "\"");
  }
  return value;
}

int JsonInt(const Json& v, std::string_view key) {
  if (!v.is_number_integer()) {
    throw ValidationError("config key \"" + std::string(key) +
                          "\" must be an integer");
  }
  return v.get<int>();
}

uint64_t JsonSeed(const Json& v, std::string_view key) {
  if (!v.is_number_unsigned() &&
      !(v.is_number_integer() && v.get<int64_t>() >= 0)) {
    throw ValidationError("config key \"" + std::string(key) +
                          "\" must be a non-negative integer");
  }
  return v.get<uint64_t>();
}

std::string JsonString(const Json& v, std::string_view key) {
  if (!v.is_string()) {
    throw ValidationError("config key \"" + std::string(key) +
                          "\" must be a string");
  }
  return v.get<std::string>();
}

void CheckServiceConfig(const ServiceConfig& c) {
  if (c.port < 0 || c.port > 65535) throw ValidationError("port out of range");
  if (c.timeout_ms <= 0) throw ValidationError("timeout_ms must be positive");
  if (c.max_sessions == 0) throw ValidationError("max_sessions must be positive");
  if (c.session_ttl_seconds <= 0) {
    throw ValidationError("session_ttl_seconds must be positive");
  }
}

void Reply(httplib::Response& res, int status, const Json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

Json ParseBody(const httplib::Request& req) {
  if (req.body.find_first_not_of(" \t\r\n") == std::string::npos) {
    return Json(nullptr);
  }
  return ParseJson(req.body);
}

template <typename Fn>
void Guarded(httplib::Response& res, int ok_status, Fn fn) {
  try {
    Reply(res, ok_status, fn());
  } catch (const std::exception& e) {
    Reply(res, StatusForError(e), ErrorBody(e));
  }
}

}  // namespace

ServiceConfig ServiceConfigFromJson(const Json& j, ServiceConfig c) {
  if (!j.is_object()) throw ParseError("service config must be a JSON object");
  for (const auto& [key, v] : j.items()) {
    if (key == "kb") {
      c.kb_path = JsonString(v, key);
    } else if (key == "patterns") {
      c.patterns_path = JsonString(v, key);
    } else if (key == "host") {
      c.host = JsonString(v, key);
    } else if (key == "port") {
      c.port = JsonInt(v, key);
    } else if (key == "predictor_url") {
      c.predictor_url = JsonString(v, key);
    } else if (key == "recommender_url") {
      c.recommender_url = JsonString(v, key);
    } else if (key == "generator_url") {
      c.generator_url = JsonString(v, key);
    } else if (key == "timeout_ms") {
      c.timeout_ms = JsonInt(v, key);
    } else if (key == "template_seed") {
      c.template_seed = JsonSeed(v, key);
    } else if (key == "max_sessions") {
      const int n = JsonInt(v, key);
      if (n <= 0) throw ValidationError("max_sessions must be positive");
      c.max_sessions = static_cast<size_t>(n);
    } else if (key == "session_ttl_seconds") {
      c.session_ttl_seconds = JsonInt(v, key);
    } else {
      throw ValidationError("unknown config key: " + key);
    }
  }
  CheckServiceConfig(c);
  return c;
}

ServiceConfig LoadServiceConfigFile(const std::string& path,
                                    ServiceConfig base) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config file " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return ServiceConfigFromJson(ParseJson(buffer.str()), std::move(base));
}

ServiceConfig ApplyEnvironment(
    ServiceConfig c, const std::function<const char*(const char*)>& getenv_fn) {
  auto get = [&](const char* name) -> std::optional<std::string> {
    const char* v = getenv_fn ? getenv_fn(name) : std::getenv(name);
    if (v == nullptr) return std::nullopt;
    return std::string(v);
  };
  if (auto v = get("ATTRDIAL_KB")) c.kb_path = *v;
  if (auto v = get("ATTRDIAL_PATTERNS")) c.patterns_path = *v;
  if (auto v = get("ATTRDIAL_HOST")) c.host = *v;
  if (auto v = get("ATTRDIAL_PORT")) c.port = ParseIntValue("ATTRDIAL_PORT", *v);
  if (auto v = get("ATTRDIAL_PREDICTOR_URL")) c.predictor_url = *v;
  if (auto v = get("ATTRDIAL_RECOMMENDER_URL")) c.recommender_url = *v;
  if (auto v = get("ATTRDIAL_GENERATOR_URL")) c.generator_url = *v;
  if (auto v = get("ATTRDIAL_TIMEOUT_MS")) {
    c.timeout_ms = ParseIntValue("ATTRDIAL_TIMEOUT_MS", *v);
  }
  if (auto v = get("ATTRDIAL_TEMPLATE_SEED")) {
    c.template_seed = ParseSeedValue("ATTRDIAL_TEMPLATE_SEED", *v);
  }
  CheckServiceConfig(c);
  return c;
}

Json ServiceConfigToJson(const ServiceConfig& c) {
  Json j = Json::object();
  j["kb"] = c.kb_path;
  j["patterns"] = c.patterns_path;
  j["host"] = c.host;
  j["port"] = c.port;
  j["predictor_url"] = c.predictor_url;
  j["recommender_url"] = c.recommender_url;
  j["generator_url"] = c.generator_url;
  j["timeout_ms"] = c.timeout_ms;
  j["template_seed"] = c.template_seed;
  j["max_sessions"] = c.max_sessions;
  j["session_ttl_seconds"] = c.session_ttl_seconds;
  return j;
}

struct ServiceRuntime::Backends {
  explicit Backends(const MovieKB& kb) : kb_recommender(kb) {}

  ReferencePolicy reference_policy;
  KbRecommender kb_recommender;
  std::unique_ptr<RemotePredictor> remote_predictor;
  std::unique_ptr<FallbackPredictor> predictor;
  std::unique_ptr<RemoteRecommender> remote_recommender;
  std::unique_ptr<FallbackRecommender> recommender;
  std::unique_ptr<RemoteGenerator> generator;
};

ServiceRuntime::ServiceRuntime(const ServiceConfig& config) : config_(config) {
  CheckServiceConfig(config_);
  if (config_.kb_path.empty()) throw ValidationError("no KB path configured");
  kb_ = MovieKB::LoadFile(config_.kb_path);
  if (!config_.patterns_path.empty()) {
    patterns_ = GenrePatternSet::LoadFile(config_.patterns_path);
  }
  backends_ = std::make_unique<Backends>(kb_);
  EngineBackends eb;
  if (!config_.predictor_url.empty()) {
    backends_->remote_predictor = std::make_unique<RemotePredictor>(
        Endpoint{config_.predictor_url, config_.timeout_ms});
    backends_->predictor = std::make_unique<FallbackPredictor>(
        *backends_->remote_predictor, backends_->reference_policy);
    eb.predictor = backends_->predictor.get();
  }
  if (!config_.recommender_url.empty()) {
    backends_->remote_recommender = std::make_unique<RemoteRecommender>(
        Endpoint{config_.recommender_url, config_.timeout_ms});
    backends_->recommender = std::make_unique<FallbackRecommender>(
        *backends_->remote_recommender, backends_->kb_recommender);
    eb.recommender = backends_->recommender.get();
  }
  if (!config_.generator_url.empty()) {
    backends_->generator = std::make_unique<RemoteGenerator>(
        Endpoint{config_.generator_url, config_.timeout_ms});
    eb.text_generator = backends_->generator.get();
  }
  engine_ = std::make_unique<Engine>(kb_, patterns_, eb);
}

ServiceRuntime::~ServiceRuntime() = default;

SessionService::SessionService(const Engine& engine, SessionConfig defaults,
                               size_t max_sessions, std::chrono::seconds ttl)
    : engine_(&engine),
      defaults_(defaults),
      max_sessions_(max_sessions),
      ttl_(ttl),
      clock_([] { return Clock::now(); }) {
  ValidateSessionConfig(defaults_);
}

SessionConfig SessionService::ConfigFromJson(const Json& j) const {
  if (!j.is_object()) throw ValidationError("config must be an object");
  SessionConfig c = defaults_;
  for (const auto& [key, v] : j.items()) {
    if (key == "template_seed") {
      c.template_seed = JsonSeed(v, key);
    } else if (key == "max_history_tokens") {
      c.max_history_tokens = JsonInt(v, key);
    } else if (key == "labeler_context_tokens") {
      c.labeler_context_tokens = JsonInt(v, key);
    } else {
      throw ValidationError("unknown config key: " + key);
    }
  }
  ValidateSessionConfig(c);
  return c;
}

Json SessionService::CreateSession(const Json& body) {
  SessionConfig config = defaults_;
  bool greet = false;
  const Json* snapshot = nullptr;
  if (!body.is_null()) {
    if (!body.is_object()) throw ValidationError("body must be an object");
    for (const auto& [key, v] : body.items()) {
      if (key == "config") {
        config = ConfigFromJson(v);
      } else if (key == "greet") {
        if (!v.is_boolean()) throw ValidationError("greet must be a boolean");
        greet = v.get<bool>();
      } else if (key == "snapshot") {
        snapshot = &v;
      } else {
        throw ValidationError("unknown request key: " + key);
      }
    }
  }

  auto entry = std::make_shared<Entry>();
  std::string id;
  {
    std::lock_guard<std::mutex> lock(mu_);
    const Clock::time_point now = clock_();
    for (auto it = sessions_.begin(); it != sessions_.end();) {
      it = now - it->second->last_used > ttl_ ? sessions_.erase(it)
                                              : std::next(it);
    }
    if (sessions_.size() >= max_sessions_) {
      throw CapacityError("session capacity of " +
                          std::to_string(max_sessions_) + " reached");
    }
    id = "s" + std::to_string(next_id_++);
  }
  if (snapshot) {
    entry->session = engine_->LoadSession(*snapshot);
    entry->session.id = id;
  } else {
    entry->session = engine_->NewSession(id, config);
  }
  if (greet) engine_->Greet(entry->session);

  Json out = Json::object();
  out["session_id"] = id;
  out["state"] = engine_->SessionState(entry->session);
  std::lock_guard<std::mutex> lock(mu_);
  if (sessions_.size() >= max_sessions_) {
    throw CapacityError("session capacity of " + std::to_string(max_sessions_) +
                        " reached");
  }
  entry->last_used = clock_();
  sessions_.emplace(id, std::move(entry));
  return out;
}

std::shared_ptr<SessionService::Entry> SessionService::Lookup(
    const std::string& id) {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = sessions_.find(id);
  if (it == sessions_.end()) throw NotFoundError("no session " + id);
  if (clock_() - it->second->last_used > ttl_) {
    sessions_.erase(it);
    throw NotFoundError("session " + id + " expired");
  }
  it->second->last_used = clock_();
  return it->second;
}

Json SessionService::PostMessage(const std::string& id, const Json& body) {
  if (!body.is_object()) throw ValidationError("body must be {\"text\": ...}");
  const std::string text = RequireString(body, "text");
  std::shared_ptr<Entry> entry = Lookup(id);
  std::unique_lock<std::mutex> turn(entry->mu, std::try_to_lock);
  if (!turn.owns_lock()) {
    throw BusyError("session " + id + " is handling another message");
  }
  const StepResult result = engine_->Step(entry->session, text);
  return MessagePayload(entry->session, result);
}

Json SessionService::GetState(const std::string& id) {
  std::shared_ptr<Entry> entry = Lookup(id);
  std::lock_guard<std::mutex> turn(entry->mu);
  return engine_->SessionState(entry->session);
}

size_t SessionService::size() const {
  std::lock_guard<std::mutex> lock(mu_);
  return sessions_.size();
}

Json MessagePayload(const DialogSession& session, const StepResult& result) {
  const StepRecord& r = *result.record;
  const TurnTrackings current = session.Current();
  Json j = Json::object();
  j["session_id"] = session.id;
  j["turn"] = r.system_turn;
  j["response"] = result.response.text;
  Json realized = Json::array();
  for (const Attribute& a : result.response.realized) {
    realized.push_back(AttributeToJson(a));
  }
  j["realized"] = std::move(realized);
  j["phase"] = PhaseName(r.phase);
  Json trackings = Json::object();
  trackings["user"] = TrackingToJson(current.user);
  trackings["system"] = TrackingToJson(current.system);
  j["trackings"] = std::move(trackings);
  j["prediction"] = PlaceholderEntriesToJson(r.prediction);
  j["delta"] = DeltaToJson(r.delta);
  j["recommendations"] = RecommendationsToJson(session.recommendations);
  j["closed"] = session.closed;
  j["step"] = StepRecordToJson(r);
  return j;
}

HttpService::HttpService(SessionService& service)
    : service_(&service), server_(std::make_unique<httplib::Server>()) {
  httplib::Server& s = *server_;
  // httplib also sets SO_REUSEPORT, which lets a second server share the
  // port silently. Keep address reuse only.
  s.set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR,
               reinterpret_cast<const char*>(&yes), sizeof(yes));
  });
  s.Get("/health", [this](const httplib::Request&, httplib::Response& res) {
    Json j = Json::object();
    j["status"] = "ok";
    j["sessions"] = service_->size();
    Reply(res, 200, j);
  });
  s.Post("/sessions", [this](const httplib::Request& req,
                             httplib::Response& res) {
    Guarded(res, 201, [&] { return service_->CreateSession(ParseBody(req)); });
  });
  s.Post(R"(/sessions/([^/]+)/messages)",
         [this](const httplib::Request& req, httplib::Response& res) {
           Guarded(res, 200, [&] {
             return service_->PostMessage(req.matches[1], ParseBody(req));
           });
         });
  s.Get(R"(/sessions/([^/]+)/state)",
        [this](const httplib::Request& req, httplib::Response& res) {
          Guarded(res, 200,
                  [&] { return service_->GetState(req.matches[1]); });
        });
}

HttpService::~HttpService() { Stop(); }

int HttpService::Bind(const std::string& host, int port) {
  if (port == 0) {
    const int bound = server_->bind_to_any_port(host);
    if (bound < 0) throw BackendError("cannot bind " + host);
    return bound;
  }
  if (!server_->bind_to_port(host, port)) {
    throw BackendError("cannot bind " + host + ":" + std::to_string(port) +
                       " (address in use?)");
  }
  return port;
}

void HttpService::Listen() { server_->listen_after_bind(); }

void HttpService::Stop() {
  if (server_) server_->stop();
}

bool HttpService::running() const { return server_->is_running(); }

int StatusForError(const std::exception& e) {
  if (dynamic_cast<const ParseError*>(&e) ||
      dynamic_cast<const ValidationError*>(&e)) {
    return 400;
  }
  if (dynamic_cast<const NotFoundError*>(&e)) return 404;
  if (dynamic_cast<const SessionClosedError*>(&e) ||
      dynamic_cast<const BusyError*>(&e)) {
    return 409;
  }
  if (dynamic_cast<const CapacityError*>(&e)) return 503;
  return 500;
}

Json ErrorBody(const std::exception& e) {
  const char* type = "internal";
  switch (StatusForError(e)) {
    case 400:
      type = "invalid_request";
      break;
    case 404:
      type = "not_found";
      break;
    case 409:
      type = dynamic_cast<const BusyError*>(&e) ? "busy" : "session_closed";
      break;
    case 503:
      type = "capacity";
      break;
  }
  Json inner = Json::object();
  inner["type"] = type;
  inner["message"] = e.what();
  Json j = Json::object();
  j["error"] = std::move(inner);
  return j;
}

}  // namespace attrdial
