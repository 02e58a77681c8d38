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

#include "nl2fol/pipeline/trace.h"

#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>

#include "nl2fol/fol/parser.h"
#include "nl2fol/util/hash.h"

namespace nl2fol::pipeline {

using nlohmann::json;

std::string RenderCounterexample(const solver::Model& model,
                                 const smt::Signature& signature) {
  std::string out;
  std::vector<std::string> sorts;
  for (int i = 0; i < signature.sort_count; ++i) {
    sorts.push_back(smt::Sort::Named(i).ToString());
  }
  for (const auto& [sort, elems] : model.domains) {
    if (std::find(sorts.begin(), sorts.end(), sort) == sorts.end()) {
      sorts.push_back(sort);
    }
  }
  for (const std::string& sort : sorts) {
    auto it = model.domains.find(sort);
    if (it == model.domains.end()) continue;
    out += "Domain " + sort + ": {";
    for (size_t i = 0; i < it->second.size(); ++i) {
      out += (i ? ", " : "") + it->second[i];
    }
    out += "}\n";
  }
  for (const solver::Model::Definition& d : model.definitions) {
    if (!d.evaluated) {
      out += d.symbol + ": " + d.raw + "\n";
      continue;
    }
    for (const solver::Model::Row& row : d.table) {
      out += d.symbol;
      if (!row.args.empty()) {
        out += '(';
        for (size_t i = 0; i < row.args.size(); ++i) {
          out += (i ? ", " : "") + row.args[i];
        }
        out += ')';
      }
      out += " = " + row.value + "\n";
    }
  }
  if (out.empty()) out = "(empty model)\n";
  return out;
}

json ToJson(const Classification& c) {
  json j = {{"label", LabelName(c.label)}};
  if (c.reason) {
    j["reason"] = InconclusiveReasonName(*c.reason);
    j["stage"] = c.failed_stage;
    j["detail"] = c.detail;
  }
  return j;
}

Classification ClassificationFromJson(const json& j) {
  const std::string label = j.at("label").get<std::string>();
  if (label == "FALLACY") return Classification::Fallacy();
  if (label == "VALID") return Classification::Valid();
  if (label != "INCONCLUSIVE") throw Error("unknown label " + label);
  const std::string reason = j.value("reason", "stage_failure");
  InconclusiveReason r = InconclusiveReason::kStageFailure;
  for (InconclusiveReason c :
       {InconclusiveReason::kUnknown, InconclusiveReason::kTimeout,
        InconclusiveReason::kSolverError, InconclusiveReason::kStageFailure}) {
    if (InconclusiveReasonName(c) == reason) r = c;
  }
  return Classification::Inconclusive(r, j.value("stage", ""),
                                      j.value("detail", ""));
}

json ToJson(const smt::Signature& sig) {
  json preds = json::array();
  for (const smt::PredicateSignature& p : sig.predicates) {
    json sorts = json::array();
    for (const smt::Sort& s : p.arg_sorts) sorts.push_back(s.ToString());
    preds.push_back({{"name", p.name}, {"arg_sorts", sorts}});
  }
  json syms = json::array();
  for (const smt::SymbolSignature& s : sig.symbols) {
    syms.push_back({{"name", s.name},
                    {"sort", s.sort.ToString()},
                    {"bound", s.bound},
                    {"free", s.free}});
  }
  return {{"sort_count", sig.sort_count}, {"predicates", preds}, {"symbols", syms}};
}

json ToJson(const solver::Model& model) {
  json defs = json::array();
  for (const solver::Model::Definition& d : model.definitions) {
    json table = json::array();
    for (const solver::Model::Row& r : d.table) {
      table.push_back({{"args", r.args}, {"value", r.value}});
    }
    defs.push_back({{"symbol", d.symbol},
                    {"arg_sorts", d.arg_sorts},
                    {"result_sort", d.result_sort},
                    {"evaluated", d.evaluated},
                    {"table", table}});
  }
  return {{"domains", model.domains},
          {"definitions", defs},
          {"unparsed", model.unparsed},
          {"warnings", model.warnings}};
}

json ToJson(const solver::SolverOutcome& outcome) {
  json j = {{"verdict", solver::VerdictName(outcome.verdict)},
            {"raw", outcome.raw}};
  if (!outcome.error.empty()) j["error"] = outcome.error;
  if (outcome.model) j["model"] = ToJson(*outcome.model);
  if (outcome.wall_seconds > 0) j["wall_seconds"] = outcome.wall_seconds;
  return j;
}

json ToJson(const llm::NliJudgment& n) {
  json j = {{"premise", n.premise},
            {"hypothesis", n.hypothesis},
            {"label", llm::NliLabelName(n.label)},
            {"backend", llm::NliBackendName(n.backend)},
            {"short_circuit", n.short_circuit}};
  if (n.confidence) j["confidence"] = *n.confidence;
  if (!n.raw.empty()) j["raw"] = n.raw;
  if (!n.warning.empty()) j["warning"] = n.warning;
  return j;
}

namespace {

json AtomJson(const PropertyAtom& a) {
  return {{"predicate", a.predicate},
          {"args", a.args},
          {"source", AtomSourceName(a.source)},
          {"text", a.ToString()}};
}

}  // namespace

json ToJson(const PipelineTrace& t) {
  json j;
  j["trace_version"] = kTraceVersion;
  j["input"] = t.input;
  j["config"] = t.config;
  json stages = json::object();
  for (const std::string& s : StageNames()) {
    auto it = t.stage_status.find(s);
    stages[s] = it == t.stage_status.end() ? "skipped" : it->second;
  }
  j["stages"] = stages;
  if (t.claim_implication) {
    j["claim_implication"] = {{"claims", t.claim_implication->claims},
                              {"implication", t.claim_implication->implication},
                              {"no_claim", t.claim_implication->no_claim()}};
  } else {
    j["claim_implication"] = nullptr;
  }
  j["entities"] = json::array();
  for (const ReferringExpression& e : t.entities) {
    j["entities"].push_back(
        {{"text", e.text}, {"symbol", e.symbol}, {"kind", EntityKindName(e.kind)}});
  }
  j["entity_relations"] = json::array();
  for (const EntityRelation& r : t.relations) {
    json rj = {{"left", r.left},
               {"right", r.right},
               {"relation", RelationKindName(r.relation)},
               {"short_circuit", r.short_circuit}};
    if (!r.raw.empty()) rj["raw"] = r.raw;
    if (!r.warning.empty()) rj["warning"] = r.warning;
    j["entity_relations"].push_back(rj);
  }
  j["sentences"] = json::array();
  for (const SentenceForm& s : t.sentences) {
    json props = json::array();
    for (const PropertyAtom& a : s.properties) props.push_back(a.ToString());
    j["sentences"].push_back(
        {{"sentence", s.sentence},
         {"source", AtomSourceName(s.source)},
         {"properties", props},
         {"response", s.response},
         {"attempts", s.attempts},
         {"formula", s.formula ? json(fol::PrettyPrint(*s.formula)) : json(nullptr)}});
  }
  j["properties"] = json::array();
  for (const PropertyAtom& a : t.atoms) j["properties"].push_back(AtomJson(a));
  j["nli"] = json::array();
  for (const llm::NliJudgment& n : t.judgments) j["nli"].push_back(ToJson(n));
  j["background_facts"] = json::array();
  for (const BackgroundFact& f : t.facts) {
    j["background_facts"].push_back(
        {{"antecedent", f.antecedent.ToString()},
         {"consequent", f.consequent.ToString()},
         {"formula", fol::PrettyPrint(f.realized)}});
  }
  j["fol"] = t.formula ? json(t.fol_text) : json(nullptr);
  if (t.compilation) {
    j["signature"] = ToJson(t.compilation->signature);
    j["smt"] = t.compilation->script.ToString();
  } else {
    j["signature"] = nullptr;
    j["smt"] = nullptr;
  }
  j["solver"] = t.outcome ? ToJson(*t.outcome) : json(nullptr);
  j["classification"] = ToJson(t.classification);
  j["counterexample"] = t.counterexample;
  j["explanation"] = t.explanation;
  j["explanation_fallback"] = t.explanation_fallback;
  j["warnings"] = t.warnings;
  if (!t.timings.empty()) j["timings"] = t.timings;
  return j;
}

std::string TracePath(const std::string& dir, const std::string& input) {
  return (std::filesystem::path(dir) / (Sha256Hex(input) + ".json")).string();
}

std::string WriteTrace(const json& trace, const std::string& dir) {
  namespace fs = std::filesystem;
  static std::atomic<unsigned> counter{0};
  fs::create_directories(dir);
  const std::string path = TracePath(dir, trace.at("input").get<std::string>());
  const std::string tmp = path + ".tmp." + std::to_string(getpid()) + "." +
                          std::to_string(counter++);
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << trace.dump(2) << "\n";
    if (!out) throw IoError("cannot write " + tmp);
  }
  fs::rename(tmp, path);
  return path;
}

solver::SolverOutcome ReplayTrace(const json& trace,
                                  const solver::SolverConfig& cfg) {
  if (!trace.contains("fol") || !trace["fol"].is_string()) {
    throw Error("trace holds no formula");
  }
  smt::Compilation c = smt::CompileText(trace["fol"].get<std::string>());
  return solver::RunSolver(c.script, cfg);
}

}  // namespace nl2fol::pipeline
