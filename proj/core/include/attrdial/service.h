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
// HTTP/JSON session service.
//
//   GET  /health                    {"status": "ok", "sessions": n}
//   POST /sessions                  {"config"?: {...}, "greet"?: bool,
//                                    "snapshot"?: state}
//                                   -> 201 {"session_id", "state"}
//   POST /sessions/{id}/messages    {"text": str} -> 200 message payload
//   GET  /sessions/{id}/state       -> 200 session snapshot
//
// Errors are {"error": {"type", "message"}} with 400 (bad request), 404
// (unknown or expired session), 409 (closed or busy session) and 503
// (session capacity reached).

#ifndef ATTRDIAL_SERVICE_H_
#define ATTRDIAL_SERVICE_H_

#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>

#include "attrdial/engine.h"
#include "attrdial/errors.h"
#include "attrdial/payload.h"

namespace httplib {
class Server;
}

namespace attrdial {

class BusyError : public Error {
 public:
  using Error::Error;
};

class CapacityError : public Error {
 public:
  using Error::Error;
};

struct ServiceConfig {
  std::string kb_path;
  std::string patterns_path;
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string predictor_url;    // empty: reference policy
  std::string recommender_url;  // empty: KB recommender
  std::string generator_url;    // empty: templates
  int timeout_ms = 2000;
  uint64_t template_seed = 0;
  size_t max_sessions = 1024;
  int session_ttl_seconds = 3600;
};

// Reads a JSON config object. Unknown keys raise ValidationError naming
// them.
ServiceConfig ServiceConfigFromJson(const Json& j,
                                    ServiceConfig base = ServiceConfig());
ServiceConfig LoadServiceConfigFile(const std::string& path,
                                    ServiceConfig base = ServiceConfig());

// Overrides from ATTRDIAL_KB, ATTRDIAL_PATTERNS, ATTRDIAL_HOST,
// ATTRDIAL_PORT, ATTRDIAL_PREDICTOR_URL, ATTRDIAL_RECOMMENDER_URL,
// ATTRDIAL_GENERATOR_URL, ATTRDIAL_TIMEOUT_MS and ATTRDIAL_TEMPLATE_SEED.
// getenv is injectable for tests.
ServiceConfig ApplyEnvironment(
    ServiceConfig config,
    const std::function<const char*(const char*)>& getenv_fn = nullptr);

Json ServiceConfigToJson(const ServiceConfig& config);

// Everything the engine needs, loaded from a config: KB, patterns and the
// remote backends with reference fallbacks.
class ServiceRuntime {
 public:
  // Throws ParseError/ValidationError when the KB or patterns cannot load.
  explicit ServiceRuntime(const ServiceConfig& config);
  ~ServiceRuntime();

  const Engine& engine() const { return *engine_; }
  const ServiceConfig& config() const { return config_; }

 private:
  struct Backends;
  ServiceConfig config_;
  MovieKB kb_;
  GenrePatternSet patterns_;
  std::unique_ptr<Backends> backends_;
  std::unique_ptr<Engine> engine_;
};

// Thread-safe session store over an engine. Turns of one session run one at
// a time; a second concurrent message gets BusyError.
class SessionService {
 public:
  using Clock = std::chrono::steady_clock;

  SessionService(const Engine& engine, SessionConfig defaults = {},
                 size_t max_sessions = 1024,
                 std::chrono::seconds ttl = std::chrono::hours(1));

  // body may be null or an object with optional "config", "greet" and
  // "snapshot" members. Returns {"session_id", "state"}.
  Json CreateSession(const Json& body);
  // Returns the message payload for one user turn.
  Json PostMessage(const std::string& id, const Json& body);
  Json GetState(const std::string& id);
  size_t size() const;

  // For expiry tests.
  void set_clock(std::function<Clock::time_point()> clock) {
    clock_ = std::move(clock);
  }

 private:
  struct Entry {
    std::mutex mu;
    DialogSession session;
    Clock::time_point last_used;
  };

  std::shared_ptr<Entry> Lookup(const std::string& id);
  SessionConfig ConfigFromJson(const Json& j) const;

  const Engine* engine_;
  SessionConfig defaults_;
  size_t max_sessions_;
  std::chrono::seconds ttl_;
  std::function<Clock::time_point()> clock_;
  mutable std::mutex mu_;
  std::map<std::string, std::shared_ptr<Entry>> sessions_;
  uint64_t next_id_ = 1;
};

// The message payload: response, current trackings, prediction, delta,
// recommendations, phase and the full step record.
Json MessagePayload(const DialogSession& session, const StepResult& result);

// Binds a SessionService to HTTP routes.
class HttpService {
 public:
  explicit HttpService(SessionService& service);
  ~HttpService();

  // Throws BackendError when the address cannot be bound. Port 0 picks a
  // free port; returns the bound port.
  int Bind(const std::string& host, int port);
  // Serves until Stop. Call after Bind.
  void Listen();
  void Stop();
  bool running() const;

 private:
  SessionService* service_;
  std::unique_ptr<httplib::Server> server_;
};

// HTTP status for a library error: 400, 404, 409, 503 or 500.
int StatusForError(const std::exception& e);
Json ErrorBody(const std::exception& e);

}  // namespace attrdial

#endif  // ATTRDIAL_SERVICE_H_
