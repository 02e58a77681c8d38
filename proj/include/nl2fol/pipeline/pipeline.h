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

// Natural language argument -> formula -> solver verdict, with a trace.

#ifndef NL2FOL_PIPELINE_PIPELINE_H_
#define NL2FOL_PIPELINE_PIPELINE_H_

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "nl2fol/llm/gateway.h"
#include "nl2fol/pipeline/types.h"
#include "nl2fol/smt/compiler.h"
#include "nl2fol/solver/solver.h"

namespace nl2fol::pipeline {

inline constexpr int kTraceVersion = 1;

// Stage names as they appear in traces and StageFailure::stage().
inline constexpr const char* kStageClaimImplication = "claim_implication";
inline constexpr const char* kStageEntities = "entities";
inline constexpr const char* kStageRelations = "entity_relations";
inline constexpr const char* kStageProperties = "properties";
inline constexpr const char* kStageBackground = "background";
inline constexpr const char* kStageFol = "fol";
inline constexpr const char* kStageCompile = "compile";
inline constexpr const char* kStageSolve = "solve";
inline constexpr const char* kStageInterpret = "interpret";

// Stages in execution order.
const std::vector<std::string>& StageNames();

struct PipelineTrace {
  std::string input;
  nlohmann::json config;
  std::optional<ClaimImplication> claim_implication;
  std::vector<ReferringExpression> entities;
  std::vector<EntityRelation> relations;
  std::vector<SentenceForm> sentences;  // claims first, implication last
  std::vector<PropertyAtom> atoms;      // one per predicate name
  std::vector<llm::NliJudgment> judgments;
  std::vector<BackgroundFact> facts;
  std::string fol_text;
  std::optional<fol::Formula> formula;
  std::optional<smt::Compilation> compilation;
  std::optional<solver::SolverOutcome> outcome;
  Classification classification;
  std::string counterexample;  // deterministic rendering
  std::string explanation;     // LLM interpretation, if any
  bool explanation_fallback = false;
  std::map<std::string, std::string> stage_status;  // ok | failed | skipped
  std::map<std::string, double> timings;            // seconds per stage
  std::vector<std::string> warnings;
};

struct PipelineOptions {
  bool record_timings = true;  // off for bit-stable replay output
  bool interpret = true;       // ask the LLM to explain counterexamples
  int fol_retries = 2;         // re-asks after a formula parse error
};

class Pipeline {
 public:
  Pipeline(llm::Gateway& gateway, solver::SolverConfig solver,
           PipelineOptions options = {});

  const solver::SolverConfig& solver_config() const { return solver_; }
  const PipelineOptions& options() const { return options_; }
  // Settings that shape the output, without machine-specific paths or keys.
  nlohmann::json ConfigSnapshot() const;

  // Individual stages. Each appends its warnings to `warnings`.
  ClaimImplication ParseClaimImplication(const std::string& text,
                                         std::vector<std::string>& warnings);
  std::vector<ReferringExpression> ExtractEntities(
      const ClaimImplication& ci, std::vector<std::string>& warnings);
  EntityRelation ClassifyPair(const ReferringExpression& a,
                              const ReferringExpression& b);
  std::vector<EntityRelation> ClassifyEntityRelations(
      const std::vector<ReferringExpression>& entities,
      std::vector<std::string>& warnings);
  // Fills SentenceForm::properties for every sentence of `ci`.
  std::vector<SentenceForm> ExtractProperties(
      const ClaimImplication& ci,
      const std::vector<ReferringExpression>& entities,
      std::vector<std::string>& warnings);
  // Ordered-pair NLI over `atoms`. All judgments go to `judgments`.
  std::vector<BackgroundFact> RetrieveBackground(
      const std::vector<PropertyAtom>& atoms,
      const std::vector<ReferringExpression>& entities,
      const std::vector<EntityRelation>& relations, const std::string& context,
      std::vector<llm::NliJudgment>& judgments);
  // Formula for one sentence via the formulation prompt, with re-asks.
  fol::Formula FormulateSentence(SentenceForm& form,
                                 const std::vector<ReferringExpression>& entities,
                                 const std::vector<EntityRelation>& relations);
  std::string InterpretCounterexample(const solver::Model& model,
                                      PipelineTrace& trace);

  // Full chain. Only ConfigError escapes; every other failure becomes an
  // Inconclusive classification. The trace is always complete.
  PipelineTrace Classify(const std::string& text);

 private:
  llm::Gateway& gateway_;
  solver::SolverConfig solver_;
  PipelineOptions options_;
};

// Deduplicates atoms by predicate name, keeping the first occurrence.
std::vector<PropertyAtom> CollectAtoms(const std::vector<SentenceForm>& forms);

// "Love(man, cheese)": symbols replaced by identifiers derived from the
// entity phrases.
std::string SurfaceForm(const PropertyAtom& atom,
                        const std::vector<ReferringExpression>& entities);

// The universal conjunct for `antecedent => consequent`. When the first
// arguments are the same entity, or entities related by EQUAL or SUBSET,
// both are replaced by one fresh bound variable; otherwise the implication
// is kept ground under a vacuous binder.
fol::Formula RealizeFact(const PropertyAtom& antecedent,
                         const PropertyAtom& consequent,
                         const std::vector<EntityRelation>& relations);

// (facts & claim conjuncts) -> implication. With neither facts nor claims
// the implication stands alone.
fol::Formula AssembleFormula(const std::vector<BackgroundFact>& facts,
                             const std::vector<fol::Formula>& claims,
                             const fol::Formula& implication);

// Domain listing and truth table of every declared symbol.
std::string RenderCounterexample(const solver::Model& model,
                                 const smt::Signature& signature);

Classification ClassificationFor(const solver::SolverOutcome& outcome);

// Prompt-1 style direct classification.
Classification BaselineClassify(llm::Gateway& gateway, const std::string& text,
                                std::string* raw = nullptr);

}  // namespace nl2fol::pipeline

#endif  // NL2FOL_PIPELINE_PIPELINE_H_
