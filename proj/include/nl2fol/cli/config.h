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

// Command-line configuration. Later sources override earlier ones:
// built-in defaults, JSON config file, environment, flags.
//
// Config file keys (all optional):
//   {"solver": {"path", "timeout_seconds", "finite_model_find", "extra_args"},
//    "llm": {"url", "model", "key", "temperature", "max_tokens",
//            "max_in_flight"},
//    "mode": "replay" | "record" | "live", "fixture_dir",
//    "nli": {"backend", "url", "threshold"},
//    "unknown_as", "parallelism", "out", "interpret", "fol_retries",
//    "timings"}
//
// Environment: NL2FOL_SOLVER, NL2FOL_LLM_URL, NL2FOL_LLM_MODEL,
// NL2FOL_LLM_KEY, NL2FOL_MODE, NL2FOL_FIXTURE_DIR, NL2FOL_NLI_URL.

#ifndef NL2FOL_CLI_CONFIG_H_
#define NL2FOL_CLI_CONFIG_H_

#include <functional>
#include <memory>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "nl2fol/eval/metrics.h"
#include "nl2fol/llm/gateway.h"
#include "nl2fol/pipeline/pipeline.h"
#include "nl2fol/solver/solver.h"

namespace nl2fol::cli {

struct CliConfig {
  solver::SolverConfig solver;  // empty executable: search PATH at use
  llm::GatewayConfig gateway;   // gateway.mode is only a default, see mode
  std::optional<llm::Mode> mode;  // unset: replay if fixture_dir exists, else live
  std::string llm_url = "https://api.openai.com/v1";
  std::string llm_key;
  std::string nli_url;
  std::string out_dir = "nl2fol-out";
  eval::UnknownAs unknown_as = eval::UnknownAs::kFallacy;
  int parallelism = 4;
  pipeline::PipelineOptions pipeline;

  CliConfig();
};

// Both throw ConfigError on unknown keys or ill-typed values.
void ApplyJson(CliConfig& cfg, const nlohmann::json& j);
void ApplyConfigFile(CliConfig& cfg, const std::string& path);

using EnvLookup = std::function<const char*(const char*)>;
void ApplyEnvironment(CliConfig& cfg, const EnvLookup& getenv);

// The mode after the fixture-directory default is applied.
llm::Mode EffectiveMode(const CliConfig& cfg);

// Resolved solver settings. Throws ConfigError if none is runnable.
solver::SolverConfig ResolveSolver(const CliConfig& cfg);

// Gateway with the HTTP backends the mode needs. Throws ConfigError when
// live or record mode lacks a key or URL.
std::unique_ptr<llm::Gateway> MakeGateway(const CliConfig& cfg);

// Everything except the API key.
nlohmann::json ToJson(const CliConfig& cfg);

}  // namespace nl2fol::cli

#endif  // NL2FOL_CLI_CONFIG_H_
