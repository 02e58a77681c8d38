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

// Trace serialization. The schema is described in docs/trace_schema.md.

#ifndef NL2FOL_PIPELINE_TRACE_H_
#define NL2FOL_PIPELINE_TRACE_H_

#include <string>

#include <nlohmann/json.hpp>

#include "nl2fol/pipeline/pipeline.h"

namespace nl2fol::pipeline {

nlohmann::json ToJson(const Classification& c);
nlohmann::json ToJson(const smt::Signature& sig);
nlohmann::json ToJson(const solver::Model& model);
nlohmann::json ToJson(const solver::SolverOutcome& outcome);
nlohmann::json ToJson(const llm::NliJudgment& j);
nlohmann::json ToJson(const PipelineTrace& trace);

// Inverse of ToJson(Classification). Throws Error on malformed input.
Classification ClassificationFromJson(const nlohmann::json& j);

// "<dir>/<sha256 of input>.json"
std::string TracePath(const std::string& dir, const std::string& input);

// Writes `trace` atomically to TracePath(dir, input); returns the path.
std::string WriteTrace(const nlohmann::json& trace, const std::string& dir);

// Recompiles the stored formula and runs the solver again. Needs no LLM.
// Throws Error if the trace holds no formula.
solver::SolverOutcome ReplayTrace(const nlohmann::json& trace,
                                  const solver::SolverConfig& cfg);

}  // namespace nl2fol::pipeline

#endif  // NL2FOL_PIPELINE_TRACE_H_
