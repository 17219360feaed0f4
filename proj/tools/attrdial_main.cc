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
// attrdial: chat, annotate, augment, eval, validate-kb and serve.
//
// Exit codes: 0 ok, 1 usage, 2 invalid input, 3 runtime failure.

#include <unistd.h>

#include <csignal>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "attrdial/datapipe.h"
#include "attrdial/engine.h"
#include "attrdial/errors.h"
#include "attrdial/eval.h"
#include "attrdial/service.h"

namespace attrdial {
namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitRuntime = 3;

struct CommonFlags {
  std::string config_path;
  std::string kb_path;
  std::string patterns_path;
  std::optional<uint64_t> seed;
  bool json = false;
};

void AddCommon(CLI::App* cmd, CommonFlags& f, bool with_seed) {
  cmd->add_option("--config", f.config_path, "JSON config file");
  cmd->add_option("--kb", f.kb_path, "movie knowledge base (JSONL)");
  cmd->add_option("--patterns", f.patterns_path, "genre pattern set (JSON)");
  if (with_seed) cmd->add_option("--seed", f.seed, "random or template seed");
  cmd->add_flag("--json", f.json, "machine-readable output");
}

// Defaults, then the config file, then ATTRDIAL_* variables, then flags.
ServiceConfig ResolveConfig(const CommonFlags& f) {
  ServiceConfig c;
  c.kb_path = ATTRDIAL_DEFAULT_DATA_DIR "/kb/movies.jsonl";
  c.patterns_path = ATTRDIAL_DEFAULT_DATA_DIR "/genre_patterns.json";
  if (!f.config_path.empty()) c = LoadServiceConfigFile(f.config_path, c);
  c = ApplyEnvironment(c);
  if (!f.kb_path.empty()) c.kb_path = f.kb_path;
  if (!f.patterns_path.empty()) c.patterns_path = f.patterns_path;
  if (f.seed) c.template_seed = *f.seed;
  return c;
}

struct Resources {
  MovieKB kb;
  GenrePatternSet patterns;
};

std::unique_ptr<Resources> LoadResources(const ServiceConfig& c) {
  auto r = std::make_unique<Resources>();
  r->kb = MovieKB::LoadFile(c.kb_path);
  if (!c.patterns_path.empty()) {
    r->patterns = GenrePatternSet::LoadFile(c.patterns_path);
  }
  return r;
}

std::ofstream OpenOutput(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write " + path);
  return out;
}

std::string Compact(const AttributeTracking& t) {
  std::string out = "{";
  for (const auto& [a, label] : t.map()) {
    if (out.size() > 1) out += ", ";
    out += DebugString(a) + (label == Label::kPos ? "+" : "-");
  }
  return out + "}";
}

std::string Compact(const AttributeDelta& d) {
  std::string out = "{";
  for (const TrackingEntry& e : d.entries) {
    if (out.size() > 1) out += ", ";
    out += DebugString(e.attribute) + (e.label == Label::kPos ? "+" : "-");
  }
  return out + "}";
}

void PrintTurn(const DialogSession& session, const StepResult& r,
               bool json) {
  if (json) {
    std::cout << MessagePayload(session, r).dump() << "\n";
    return;
  }
  const TurnTrackings cur = session.Current();
  std::cout << "system: " << r.response.text << "\n"
            << "  phase=" << PhaseName(r.record->phase)
            << " delta=" << Compact(r.record->delta) << "\n"
            << "  user=" << Compact(cur.user) << "\n"
            << "  system=" << Compact(cur.system) << "\n";
}

int RunChat(const CommonFlags& f, bool greet) {
  const ServiceConfig c = ResolveConfig(f);
  ServiceRuntime runtime(c);
  const Engine& engine = runtime.engine();
  SessionConfig sc;
  sc.template_seed = c.template_seed;
  DialogSession session = engine.NewSession("chat", sc);
  const bool interactive = isatty(STDIN_FILENO);
  if (greet) PrintTurn(session, engine.Greet(session), f.json);

  std::string line;
  while (true) {
    if (interactive) std::cout << "> " << std::flush;
    if (!std::getline(std::cin, line)) break;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    if (line == "/quit") break;
    if (line == "/state") {
      std::cout << engine.SessionState(session).dump(2) << "\n";
      continue;
    }
    if (!f.json) std::cout << "user: " << line << "\n";
    PrintTurn(session, engine.Step(session, line), f.json);
    if (session.closed) {
      if (!f.json) std::cout << "(session closed)\n";
      break;
    }
  }
  return kExitOk;
}

int RunAnnotate(const CommonFlags& f, const std::string& in_path,
                const std::string& out_path) {
  const ServiceConfig c = ResolveConfig(f);
  auto r = LoadResources(c);
  const MentionExtractor extractor(r->kb, r->patterns);
  std::vector<CorpusDialog> corpus =
      LoadCorpusFile(in_path, AttributeRegistry(r->kb));
  Json diagnostics = Json::array();
  int annotated = 0;
  for (CorpusDialog& d : corpus) {
    Annotation a = Annotate(d, extractor);
    if (a.diagnostic) {
      diagnostics.push_back(*a.diagnostic);
      if (!f.json) std::cerr << *a.diagnostic << "\n";
    } else {
      ++annotated;
    }
    d.gold = std::move(a.gold);
  }
  if (out_path.empty()) {
    WriteCorpus(std::cout, corpus);
  } else {
    std::ofstream out = OpenOutput(out_path);
    WriteCorpus(out, corpus);
  }
  std::ostream& report = out_path.empty() ? std::cerr : std::cout;
  if (f.json) {
    Json j = Json::object();
    j["dialogs"] = corpus.size();
    j["annotated"] = annotated;
    j["skipped"] = diagnostics.size();
    j["diagnostics"] = std::move(diagnostics);
    report << j.dump() << "\n";
  } else {
    report << "annotated " << annotated << " of " << corpus.size()
           << " dialogs\n";
  }
  return kExitOk;
}

int RunAugment(const CommonFlags& f, const std::string& in_path,
               const std::string& out_path, int multiplier) {
  const ServiceConfig c = ResolveConfig(f);
  auto r = LoadResources(c);
  const MentionExtractor extractor(r->kb, r->patterns);
  const std::vector<CorpusDialog> corpus =
      LoadCorpusFile(in_path, AttributeRegistry(r->kb));
  AugmentOptions options;
  options.multiplier = multiplier;
  options.seed = f.seed.value_or(0);

  std::vector<CorpusDialog> out_corpus;
  Json diagnostics = Json::array();
  size_t rejected = 0;
  size_t failures = 0;
  for (const CorpusDialog& d : corpus) {
    AugmentResult a = Augment(d, extractor, options);
    rejected += a.rejected;
    if (a.diagnostic && multiplier > 0) diagnostics.push_back(*a.diagnostic);
    for (CorpusDialog& o : a.dialogs) {
      // Independent re-check of what is about to be written.
      if (!ValidateAugmentation(d, o, extractor)) ++failures;
      out_corpus.push_back(std::move(o));
    }
  }
  if (out_path.empty()) {
    WriteCorpus(std::cout, out_corpus);
  } else {
    std::ofstream out = OpenOutput(out_path);
    WriteCorpus(out, out_corpus);
  }
  std::ostream& report = out_path.empty() ? std::cerr : std::cout;
  if (f.json) {
    Json j = Json::object();
    j["dialogs_in"] = corpus.size();
    j["dialogs_out"] = out_corpus.size();
    j["candidates_rejected"] = rejected;
    j["validation_failures"] = failures;
    j["diagnostics"] = std::move(diagnostics);
    report << j.dump() << "\n";
  } else {
    report << "augmented " << corpus.size() << " dialogs into "
           << out_corpus.size() << " (validation failures: " << failures
           << ")\n";
    for (const Json& d : diagnostics) report << d.get<std::string>() << "\n";
  }
  return failures == 0 ? kExitOk : kExitRuntime;
}

int RunEval(const CommonFlags& f, const std::string& in_path,
            const std::string& predictor_name, const std::string& out_path,
            bool rows) {
  auto predict = NamedPredictor(predictor_name);
  if (!predict) {
    throw ValidationError("unknown predictor \"" + predictor_name +
                          "\" (reference, oracle or empty)");
  }
  const ServiceConfig c = ResolveConfig(f);
  auto r = LoadResources(c);
  const MentionExtractor extractor(r->kb, r->patterns);
  const std::vector<CorpusDialog> corpus =
      LoadCorpusFile(in_path, AttributeRegistry(r->kb));
  const EvalRun run = ScoreCorpus(corpus, extractor, *predict);
  std::string text;
  if (f.json) {
    Json j = ReportToJson(run.report);
    if (rows) j["rows"] = RowsToJson(run.rows);
    text = j.dump(2) + "\n";
  } else {
    text = ReportToTable(run.report);
  }
  if (out_path.empty()) {
    std::cout << text;
  } else {
    OpenOutput(out_path) << text;
  }
  return kExitOk;
}

int RunValidateKb(const CommonFlags& f) {
  const ServiceConfig c = ResolveConfig(f);
  const MovieKB kb = MovieKB::LoadFile(c.kb_path);
  Json j = Json::object();
  j["kb"] = c.kb_path;
  j["movies"] = kb.movies().size();
  j["genres"] = kb.AttributesOfKind(AttributeKind::kGenre).size();
  j["persons"] = kb.AttributesOfKind(AttributeKind::kPerson).size();
  j["relations"] = kb.relations().size();
  if (f.json) {
    std::cout << j.dump() << "\n";
  } else {
    std::cout << c.kb_path << ": ok, " << j["movies"] << " movies, "
              << j["genres"] << " genres, " << j["persons"] << " persons, "
              << j["relations"] << " relations\n";
  }
  return kExitOk;
}

HttpService* g_server = nullptr;

extern "C" void HandleSignal(int) {
  if (g_server) g_server->Stop();
}

int RunServe(const CommonFlags& f, std::optional<int> port,
             std::optional<std::string> host) {
  ServiceConfig c = ResolveConfig(f);
  if (port) c.port = *port;
  if (host) c.host = *host;
  ServiceRuntime runtime(c);
  SessionConfig defaults;
  defaults.template_seed = c.template_seed;
  SessionService sessions(runtime.engine(), defaults, c.max_sessions,
                          std::chrono::seconds(c.session_ttl_seconds));
  HttpService http(sessions);
  const int bound = http.Bind(c.host, c.port);
  std::cout << "listening on " << c.host << ":" << bound << std::endl;
  g_server = &http;
  std::signal(SIGINT, HandleSignal);
  std::signal(SIGTERM, HandleSignal);
  http.Listen();
  g_server = nullptr;
  return kExitOk;
}

int Main(int argc, char** argv) {
  CLI::App app{"Attribute-tracking movie recommendation dialogs"};
  app.require_subcommand(1);

  CommonFlags chat_f, ann_f, aug_f, eval_f, kb_f, serve_f;
  bool greet = false;
  std::string in_path, out_path, predictor = "reference";
  int multiplier = 1;
  bool rows = false;
  std::optional<int> port;
  std::optional<std::string> host;

  CLI::App* chat = app.add_subcommand("chat", "interactive dialog on stdin");
  AddCommon(chat, chat_f, true);
  chat->add_flag("--greet", greet, "let the system open the dialog");

  CLI::App* annotate = app.add_subcommand("annotate", "add gold trackings");
  AddCommon(annotate, ann_f, false);
  annotate->add_option("--in", in_path, "corpus (JSONL)")->required();
  annotate->add_option("--out", out_path, "annotated corpus (default stdout)");

  CLI::App* augment =
      app.add_subcommand("augment", "relation-preserving substitution");
  AddCommon(augment, aug_f, true);
  augment->add_option("--in", in_path, "corpus (JSONL)")->required();
  augment->add_option("--out", out_path, "augmented corpus (default stdout)");
  augment->add_option("-k,--multiplier", multiplier, "outputs per dialog")
      ->check(CLI::NonNegativeNumber);

  CLI::App* eval = app.add_subcommand("eval", "score a predictor");
  AddCommon(eval, eval_f, false);
  eval->add_option("--in", in_path, "annotated corpus (JSONL)")->required();
  eval->add_option("--predictor", predictor, "reference, oracle or empty");
  eval->add_option("--out", out_path, "report file (default stdout)");
  eval->add_flag("--rows", rows, "include per-example rows (with --json)");

  CLI::App* validate_kb =
      app.add_subcommand("validate-kb", "load and check a knowledge base");
  AddCommon(validate_kb, kb_f, false);

  CLI::App* serve = app.add_subcommand("serve", "run the HTTP session service");
  AddCommon(serve, serve_f, true);
  serve->add_option("--port", port, "TCP port (0 picks a free one)");
  serve->add_option("--host", host, "bind address");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*chat) return RunChat(chat_f, greet);
    if (*annotate) return RunAnnotate(ann_f, in_path, out_path);
    if (*augment) return RunAugment(aug_f, in_path, out_path, multiplier);
    if (*eval) return RunEval(eval_f, in_path, predictor, out_path, rows);
    if (*validate_kb) return RunValidateKb(kb_f);
    if (*serve) return RunServe(serve_f, port, host);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitUsage;
}

}  // namespace
}  // namespace attrdial

int main(int argc, char** argv) { return attrdial::Main(argc, argv); }
