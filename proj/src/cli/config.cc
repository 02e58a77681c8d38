// Copyright 2026 The nl2fol Authors.
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

#include "nl2fol/cli/config.h"

#include <filesystem>
#include <fstream>
#include <set>

namespace nl2fol::cli {
namespace {

using nlohmann::json;

void CheckKeys(const json& j, const char* where, std::set<std::string> allowed) {
  if (!j.is_object()) throw ConfigError(std::string(where) + " must be an object");
  for (const auto& [key, value] : j.items()) {
    if (allowed.count(key) == 0) {
      throw ConfigError("unknown config key " + std::string(where) + "." + key);
    }
  }
}

template <typename T>
void Read(const json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("config key ") + key + " has the wrong type");
  }
}

}  // namespace

CliConfig::CliConfig() {
#ifdef NL2FOL_DEFAULT_FIXTURE_DIR
  gateway.fixture_dir = NL2FOL_DEFAULT_FIXTURE_DIR;
#endif
}

void ApplyJson(CliConfig& cfg, const json& j) {
  CheckKeys(j, "config",
            {"solver", "llm", "mode", "fixture_dir", "nli", "unknown_as",
             "parallelism", "out", "interpret", "fol_retries", "timings"});
  if (j.contains("solver")) {
    const json& s = j["solver"];
    CheckKeys(s, "solver", {"path", "timeout_seconds", "finite_model_find", "extra_args"});
    Read(s, "path", cfg.solver.executable);
    Read(s, "timeout_seconds", cfg.solver.timeout_seconds);
    Read(s, "finite_model_find", cfg.solver.finite_model_find);
    Read(s, "extra_args", cfg.solver.extra_args);
  }
  if (j.contains("llm")) {
    const json& l = j["llm"];
    CheckKeys(l, "llm", {"url", "model", "key", "temperature", "max_tokens", "max_in_flight"});
    Read(l, "url", cfg.llm_url);
    Read(l, "model", cfg.gateway.model);
    Read(l, "key", cfg.llm_key);
    Read(l, "temperature", cfg.gateway.temperature);
    Read(l, "max_tokens", cfg.gateway.max_tokens);
    Read(l, "max_in_flight", cfg.gateway.max_in_flight);
  }
  if (j.contains("mode")) {
    std::string mode;
    Read(j, "mode", mode);
    cfg.mode = llm::ParseMode(mode);
  }
  Read(j, "fixture_dir", cfg.gateway.fixture_dir);
  if (j.contains("nli")) {
    const json& n = j["nli"];
    CheckKeys(n, "nli", {"backend", "url", "threshold"});
    if (n.contains("backend")) {
      std::string backend;
      Read(n, "backend", backend);
      cfg.gateway.nli_backend = llm::ParseNliBackend(backend);
    }
    Read(n, "url", cfg.nli_url);
    Read(n, "threshold", cfg.gateway.entailment_threshold);
  }
  if (j.contains("unknown_as")) {
    std::string u;
    Read(j, "unknown_as", u);
    cfg.unknown_as = eval::ParseUnknownAs(u);
  }
  Read(j, "parallelism", cfg.parallelism);
  Read(j, "out", cfg.out_dir);
  Read(j, "interpret", cfg.pipeline.interpret);
  Read(j, "fol_retries", cfg.pipeline.fol_retries);
  Read(j, "timings", cfg.pipeline.record_timings);
}

void ApplyConfigFile(CliConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config file " + path + ": " + e.what());
  }
  ApplyJson(cfg, j);
}

void ApplyEnvironment(CliConfig& cfg, const EnvLookup& getenv) {
  auto get = [&](const char* name) -> std::optional<std::string> {
    const char* v = getenv(name);
    if (v == nullptr || *v == '\0') return std::nullopt;
    return std::string(v);
  };
  if (auto v = get("NL2FOL_SOLVER")) cfg.solver.executable = *v;
  if (auto v = get("NL2FOL_LLM_URL")) cfg.llm_url = *v;
  if (auto v = get("NL2FOL_LLM_MODEL")) cfg.gateway.model = *v;
  if (auto v = get("NL2FOL_LLM_KEY")) cfg.llm_key = *v;
  if (auto v = get("NL2FOL_MODE")) cfg.mode = llm::ParseMode(*v);
  if (auto v = get("NL2FOL_FIXTURE_DIR")) cfg.gateway.fixture_dir = *v;
  if (auto v = get("NL2FOL_NLI_URL")) cfg.nli_url = *v;
}

llm::Mode EffectiveMode(const CliConfig& cfg) {
  if (cfg.mode) return *cfg.mode;
  std::error_code ec;
  if (!cfg.gateway.fixture_dir.empty() &&
      std::filesystem::is_directory(cfg.gateway.fixture_dir, ec)) {
    return llm::Mode::kReplay;
  }
  return llm::Mode::kLive;
}

solver::SolverConfig ResolveSolver(const CliConfig& cfg) {
  solver::SolverConfig s = cfg.solver;
  if (s.executable.empty()) s.executable = solver::SolverConfig::FromEnvironment().executable;
  s.Validate();
  return s;
}

std::unique_ptr<llm::Gateway> MakeGateway(const CliConfig& cfg) {
  llm::GatewayConfig g = cfg.gateway;
  g.mode = EffectiveMode(cfg);
  std::unique_ptr<llm::LlmBackend> backend;
  std::unique_ptr<llm::EntailmentClassifier> classifier;
  if (g.mode != llm::Mode::kReplay) {
    if (cfg.llm_key.empty()) {
      throw ConfigError(std::string(llm::ModeName(g.mode)) +
                        " mode needs an LLM API key (NL2FOL_LLM_KEY or --llm-key)");
    }
    if (cfg.llm_url.empty()) throw ConfigError("no LLM URL configured");
    llm::HttpSettings http;
    http.base_url = cfg.llm_url;
    http.api_key = cfg.llm_key;
    backend = std::make_unique<llm::HttpChatBackend>(http);
    if (g.nli_backend == llm::NliBackend::kExternalClassifier) {
      if (cfg.nli_url.empty()) {
        throw ConfigError("the classifier NLI backend needs NL2FOL_NLI_URL or --nli-url");
      }
      http.base_url = cfg.nli_url;
      classifier = std::make_unique<llm::HttpEntailmentClassifier>(http);
    }
  }
  return std::make_unique<llm::Gateway>(
      g, llm::PromptLibrary::Load(llm::PromptLibrary::DefaultDirectory()),
      std::move(backend), std::move(classifier));
}

json ToJson(const CliConfig& cfg) {
  return {{"solver",
           {{"path", cfg.solver.executable},
            {"timeout_seconds", cfg.solver.timeout_seconds},
            {"finite_model_find", cfg.solver.finite_model_find},
            {"extra_args", cfg.solver.extra_args}}},
          {"llm",
           {{"url", cfg.llm_url},
            {"model", cfg.gateway.model},
            {"temperature", cfg.gateway.temperature},
            {"max_tokens", cfg.gateway.max_tokens},
            {"max_in_flight", cfg.gateway.max_in_flight}}},
          {"mode", llm::ModeName(EffectiveMode(cfg))},
          {"fixture_dir", cfg.gateway.fixture_dir},
          {"nli",
           {{"backend", llm::NliBackendName(cfg.gateway.nli_backend)},
            {"url", cfg.nli_url},
            {"threshold", cfg.gateway.entailment_threshold}}},
          {"unknown_as", eval::UnknownAsName(cfg.unknown_as)},
          {"parallelism", cfg.parallelism},
          {"out", cfg.out_dir},
          {"interpret", cfg.pipeline.interpret},
          {"fol_retries", cfg.pipeline.fol_retries},
          {"timings", cfg.pipeline.record_timings}};
}

}  // namespace nl2fol::cli
