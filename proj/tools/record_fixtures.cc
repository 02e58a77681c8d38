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

// Records LLM fixtures for the example corpus from its per-example scripts.
//
//   record_fixtures --corpus tests/fixtures/corpus --solver /usr/local/bin/z3
//
// Every example is run through the full pipeline (both NLI prompt variants)
// and the end-to-end baseline in record mode. Existing fixtures are reused,
// so rerunning is idempotent.

#include <cstdlib>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "nl2fol/pipeline/pipeline.h"
#include "tools/scripted_backend.h"

namespace {

using nlohmann::json;
namespace pl = nl2fol::pipeline;

int Run(const std::string& corpus, const std::string& solver_path, double timeout) {
  std::ifstream scripts_in(corpus + "/scripts.json");
  if (!scripts_in) throw nl2fol::IoError("cannot read " + corpus + "/scripts.json");
  const json scripts = json::parse(scripts_in);
  std::ifstream data(corpus + "/corpus.jsonl");
  if (!data) throw nl2fol::IoError("cannot read " + corpus + "/corpus.jsonl");

  nl2fol::solver::SolverConfig solver;
  solver.executable = solver_path;
  solver.timeout_seconds = timeout;
  pl::PipelineOptions options;
  options.record_timings = false;

  int mismatches = 0;
  std::string line;
  while (std::getline(data, line)) {
    if (line.empty()) continue;
    const json example = json::parse(line);
    const std::string id = example.at("id");
    const std::string text = example.at("text");
    if (!scripts.contains(id)) throw nl2fol::Error("no script for " + id);
    std::string labels;
    for (auto nli : {nl2fol::llm::NliBackend::kLlmWithContext,
                     nl2fol::llm::NliBackend::kLlm}) {
      nl2fol::llm::GatewayConfig cfg;
      cfg.mode = nl2fol::llm::Mode::kRecord;
      cfg.fixture_dir = corpus + "/llm";
      cfg.nli_backend = nli;
      nl2fol::llm::Gateway gateway(
          cfg,
          nl2fol::llm::PromptLibrary::Load(
              nl2fol::llm::PromptLibrary::DefaultDirectory()),
          std::make_unique<nl2fol::tools::ScriptedBackend>(scripts[id]));
      pl::PipelineTrace trace = pl::Pipeline(gateway, solver, options).Classify(text);
      labels += std::string(pl::LabelName(trace.classification.label)) + " ";
      if (nli == nl2fol::llm::NliBackend::kLlmWithContext) {
        pl::Classification baseline = pl::BaselineClassify(gateway, text);
        labels += "baseline=" + std::string(pl::LabelName(baseline.label)) + " ";
        if (trace.classification.reason) {
          labels += "(" + trace.classification.failed_stage + ": " +
                    trace.classification.detail + ") ";
        }
      }
    }
    std::cout << id << "\tgold=" << example.at("label").get<std::string>() << "\t"
              << labels << "\n";
    if (labels.find("INCONCLUSIVE") != std::string::npos) ++mismatches;
  }
  return mismatches == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Record LLM fixtures for the example corpus"};
  std::string corpus = "tests/fixtures/corpus";
  std::string solver;
  double timeout = 10.0;
  app.add_option("--corpus", corpus, "Corpus directory")->check(CLI::ExistingDirectory);
  app.add_option("--solver", solver, "SMT solver executable")->required();
  app.add_option("--solver-timeout", timeout, "Solver timeout in seconds");
  CLI11_PARSE(app, argc, argv);
  try {
    return Run(corpus, solver, timeout);
  } catch (const std::exception& e) {
    std::cerr << "record_fixtures: " << e.what() << "\n";
    return 2;
  }
}
