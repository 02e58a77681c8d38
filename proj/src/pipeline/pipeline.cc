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

#include "nl2fol/pipeline/pipeline.h"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <filesystem>
#include <set>

#include "nl2fol/fol/parser.h"
#include "nl2fol/pipeline/responses.h"

namespace nl2fol::pipeline {
namespace {

std::string Lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string TrimCopy(std::string_view s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::string JoinSentences(const ClaimImplication& ci) {
  std::string out;
  for (const std::string& c : ci.claims) {
    out += c;
    out += ' ';
  }
  return out + ci.implication;
}

bool IsVariableSymbol(std::string_view s) {
  return fol::IsIdentifier(s) && std::islower(static_cast<unsigned char>(s[0])) &&
         Lower(s) != "forall" && Lower(s) != "exists";
}

std::string RenderEntities(const std::vector<ReferringExpression>& entities) {
  std::string out;
  for (const ReferringExpression& e : entities) {
    if (!out.empty()) out += ", ";
    out += e.text;
    if (e.symbol != e.text) out += ": " + e.symbol;
  }
  return out;
}

std::string RenderAtoms(const std::vector<PropertyAtom>& atoms) {
  std::string out;
  for (const PropertyAtom& a : atoms) {
    if (!out.empty()) out += ", ";
    out += a.ToString();
  }
  return out;
}

const ReferringExpression* FindEntity(
    const std::vector<ReferringExpression>& entities, std::string_view symbol) {
  for (const ReferringExpression& e : entities) {
    if (e.symbol == symbol) return &e;
  }
  return nullptr;
}

std::string RenderRelations(const std::vector<EntityRelation>& relations,
                            const std::vector<ReferringExpression>& entities) {
  auto name = [&](const std::string& sym) {
    const ReferringExpression* e = FindEntity(entities, sym);
    return e == nullptr || e->text == sym ? sym : e->text + " (" + sym + ")";
  };
  std::string out;
  for (const EntityRelation& r : relations) {
    std::string line;
    switch (r.relation) {
      case RelationKind::kEqual:
        line = name(r.left) + " is equal to " + name(r.right);
        break;
      case RelationKind::kSubsetLR:
        line = name(r.left) + " is a subset of " + name(r.right);
        break;
      case RelationKind::kSubsetRL:
        line = name(r.right) + " is a subset of " + name(r.left);
        break;
      case RelationKind::kUnrelated:
        continue;
    }
    if (!out.empty()) out += "; ";
    out += line;
  }
  return out;
}

bool Related(const std::string& a, const std::string& b,
             const std::vector<EntityRelation>& relations) {
  if (a == b) return true;
  for (const EntityRelation& r : relations) {
    if (r.relation == RelationKind::kUnrelated) continue;
    if ((r.left == a && r.right == b) || (r.left == b && r.right == a)) {
      return true;
    }
  }
  return false;
}

// Converts parsed atoms, checking that every argument names an entity.
std::vector<PropertyAtom> ToPropertyAtoms(
    const std::vector<fol::Formula>& parsed, AtomSource source,
    const std::set<std::string>& symbols) {
  std::vector<PropertyAtom> out;
  std::set<std::string> unknown;
  for (const fol::Formula& f : parsed) {
    PropertyAtom atom;
    atom.predicate = f.predicate();
    atom.source = source;
    for (const fol::Argument& arg : f.args()) {
      const fol::Term* t = std::get_if<fol::Term>(&arg);
      if (t == nullptr) {
        throw StageFailure(kStageProperties,
                           "nested formula in property " + fol::PrettyPrint(f));
      }
      if (symbols.count(t->name) == 0) unknown.insert(t->name);
      atom.args.push_back(t->name);
    }
    out.push_back(std::move(atom));
  }
  if (!unknown.empty()) {
    std::string names;
    for (const std::string& u : unknown) names += (names.empty() ? "" : ", ") + u;
    throw StageFailure(kStageProperties, "unknown symbols: " + names);
  }
  return out;
}

class StageTimer {
 public:
  StageTimer() : start_(std::chrono::steady_clock::now()) {}
  double Seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

nlohmann::json SnapshotOf(const llm::GatewayConfig& g,
                          const solver::SolverConfig& s,
                          const PipelineOptions& o) {
  return {
      {"mode", llm::ModeName(g.mode)},
      {"model", g.model},
      {"temperature", g.temperature},
      {"max_tokens", g.max_tokens},
      {"nli_backend", llm::NliBackendName(g.nli_backend)},
      {"entailment_threshold", g.entailment_threshold},
      {"solver",
       {{"name", std::filesystem::path(s.executable).filename().string()},
        {"timeout_seconds", s.timeout_seconds},
        {"finite_model_find", s.finite_model_find},
        {"extra_args", s.extra_args}}},
      {"fol_retries", o.fol_retries},
      {"interpret", o.interpret},
  };
}

}  // namespace

const std::vector<std::string>& StageNames() {
  static const std::vector<std::string> kNames = {
      kStageClaimImplication, kStageEntities, kStageRelations,
      kStageProperties,       kStageBackground, kStageFol,
      kStageCompile,          kStageSolve,    kStageInterpret};
  return kNames;
}

Pipeline::Pipeline(llm::Gateway& gateway, solver::SolverConfig solver,
                   PipelineOptions options)
    : gateway_(gateway), solver_(std::move(solver)), options_(options) {}

nlohmann::json Pipeline::ConfigSnapshot() const {
  return SnapshotOf(gateway_.config(), solver_, options_);
}

ClaimImplication Pipeline::ParseClaimImplication(
    const std::string& text, std::vector<std::string>& warnings) {
  llm::Bindings b = {{"input", text}};
  std::optional<ClaimImplication> ci =
      ParseClaimImplicationResponse(gateway_.Complete("claim_implication", b));
  if (!ci) {
    ci = ParseClaimImplicationResponse(gateway_.Complete(
        "claim_implication", b,
        "\n\nAnswer only with Claim: lines followed by exactly one "
        "Implication: line."));
  }
  if (!ci) {
    throw StageFailure(kStageClaimImplication, "no Implication: line in answer");
  }
  if (ci->no_claim()) {
    warnings.push_back(
        "NoClaim: no claim was found; the implication is checked on its own");
  }
  return *ci;
}

std::vector<ReferringExpression> Pipeline::ExtractEntities(
    const ClaimImplication& ci, std::vector<std::string>& warnings) {
  llm::Bindings b = {{"input", JoinSentences(ci)}};
  std::vector<EntityMention> mentions =
      ParseReferringExpressions(gateway_.Complete("entities", b));
  if (mentions.empty()) {
    mentions = ParseReferringExpressions(gateway_.Complete(
        "entities", b,
        "\n\nList them on one line as: Referring expressions: phrase: "
        "symbol, phrase: symbol"));
  }
  if (mentions.empty()) {
    throw StageFailure(kStageEntities, "no referring expressions found");
  }
  std::vector<ReferringExpression> out;
  std::set<std::string> seen_text;
  std::set<std::string> used;
  auto fresh = [&](const std::string& base) {
    std::string stem = base.empty() ? "e" : base.substr(0, 1);
    if (used.count(stem) == 0) return stem;
    for (char c = 'a'; c <= 'z'; ++c) {
      std::string s(1, c);
      if (used.count(s) == 0) return s;
    }
    for (int i = 1;; ++i) {
      std::string s = stem + std::to_string(i);
      if (used.count(s) == 0) return s;
    }
  };
  for (const EntityMention& m : mentions) {
    std::string key = Lower(TrimCopy(m.text));
    if (!seen_text.insert(key).second) continue;
    ReferringExpression e;
    e.text = TrimCopy(m.text);
    if (m.symbol.empty()) {
      e.kind = EntityKind::kConstant;
      e.symbol = SymbolFromPhrase(e.text);
      if (used.count(e.symbol) != 0) {
        std::string base = e.symbol;
        for (int i = 1; used.count(e.symbol) != 0; ++i) {
          e.symbol = base + std::to_string(i);
        }
      }
    } else {
      e.kind = EntityKind::kQuantified;
      e.symbol = m.symbol;
      if (!IsVariableSymbol(e.symbol) || used.count(e.symbol) != 0) {
        std::string replacement = fresh(SymbolFromPhrase(e.text));
        warnings.push_back("entity '" + e.text + "': symbol '" + m.symbol +
                           "' replaced by '" + replacement + "'");
        e.symbol = replacement;
      }
    }
    used.insert(e.symbol);
    out.push_back(std::move(e));
  }
  return out;
}

EntityRelation Pipeline::ClassifyPair(const ReferringExpression& a,
                                      const ReferringExpression& b) {
  EntityRelation r;
  r.left = a.symbol;
  r.right = b.symbol;
  if (Lower(TrimCopy(a.text)) == Lower(TrimCopy(b.text))) {
    r.relation = RelationKind::kEqual;
    r.short_circuit = true;
    return r;
  }
  r.raw = gateway_.Complete("entity_relation",
                            {{"entity_a", a.text}, {"entity_b", b.text}});
  switch (ParseRelationChoice(r.raw).value_or(0)) {
    case 1:
      r.relation = RelationKind::kEqual;
      break;
    case 2:
      r.relation = RelationKind::kSubsetLR;
      break;
    case 3:
      r.relation = RelationKind::kSubsetRL;
      break;
    case 4:
      r.relation = RelationKind::kUnrelated;
      break;
    default:
      r.relation = RelationKind::kUnrelated;
      r.warning = "no 1-4 choice in relation answer; treated as unrelated";
  }
  return r;
}

std::vector<EntityRelation> Pipeline::ClassifyEntityRelations(
    const std::vector<ReferringExpression>& entities,
    std::vector<std::string>& warnings) {
  std::vector<EntityRelation> out;
  for (size_t i = 0; i < entities.size(); ++i) {
    for (size_t j = i + 1; j < entities.size(); ++j) {
      EntityRelation r = ClassifyPair(entities[i], entities[j]);
      if (!r.warning.empty()) {
        warnings.push_back(entities[i].text + " / " + entities[j].text + ": " +
                           r.warning);
      }
      out.push_back(std::move(r));
    }
  }
  return out;
}

std::vector<SentenceForm> Pipeline::ExtractProperties(
    const ClaimImplication& ci, const std::vector<ReferringExpression>& entities,
    std::vector<std::string>& warnings) {
  if (entities.empty()) {
    throw StageFailure(kStageProperties, "no entities to attach properties to");
  }
  std::set<std::string> symbols;
  std::string symbol_list;
  for (const ReferringExpression& e : entities) {
    symbols.insert(e.symbol);
    symbol_list += (symbol_list.empty() ? "" : ", ") + e.symbol;
  }
  std::vector<SentenceForm> forms;
  for (const std::string& c : ci.claims) {
    forms.push_back(SentenceForm{c, AtomSource::kClaim, {}, {}, 0, {}});
  }
  forms.push_back(
      SentenceForm{ci.implication, AtomSource::kImplication, {}, {}, 0, {}});
  const std::string rendered = RenderEntities(entities);
  for (SentenceForm& form : forms) {
    llm::Bindings b = {{"sentence", form.sentence},
                       {"referring_expressions", rendered}};
    std::string problem;
    for (int attempt = 0; attempt < 2; ++attempt) {
      std::string appendix;
      if (attempt > 0) {
        appendix = "\n\nThe previous answer was unusable (" + problem +
                   "). Use only these symbols as arguments: " + symbol_list +
                   ".";
      }
      try {
        form.properties = ToPropertyAtoms(
            ParsePropertiesResponse(gateway_.Complete("properties", b, appendix)),
            form.source, symbols);
        problem.clear();
        break;
      } catch (const fol::SyntaxError& e) {
        problem = e.what();
      } catch (const StageFailure& e) {
        problem = e.what();
      }
    }
    if (!problem.empty()) throw StageFailure(kStageProperties, problem);
    if (form.properties.empty()) {
      warnings.push_back("no properties for sentence: " + form.sentence);
    }
  }
  return forms;
}

std::vector<PropertyAtom> CollectAtoms(const std::vector<SentenceForm>& forms) {
  std::vector<PropertyAtom> out;
  std::set<std::string> seen;
  for (const SentenceForm& f : forms) {
    for (const PropertyAtom& a : f.properties) {
      if (seen.insert(a.predicate).second) out.push_back(a);
    }
  }
  return out;
}

std::string SurfaceForm(const PropertyAtom& atom,
                        const std::vector<ReferringExpression>& entities) {
  PropertyAtom surface = atom;
  for (std::string& arg : surface.args) {
    if (const ReferringExpression* e = FindEntity(entities, arg)) {
      arg = SymbolFromPhrase(e->text);
    }
  }
  return surface.ToString();
}

fol::Formula RealizeFact(const PropertyAtom& antecedent,
                         const PropertyAtom& consequent,
                         const std::vector<EntityRelation>& relations) {
  const bool generalize = !antecedent.args.empty() && !consequent.args.empty() &&
                          Related(antecedent.args[0], consequent.args[0], relations);
  std::set<std::string> kept;
  for (const PropertyAtom* a : {&antecedent, &consequent}) {
    for (size_t i = generalize ? 1 : 0; i < a->args.size(); ++i) {
      kept.insert(a->args[i]);
    }
  }
  std::string var = "x";
  for (int i = 1; kept.count(var) != 0; ++i) var = "x" + std::to_string(i);
  auto build = [&](const PropertyAtom& a) {
    std::vector<fol::Argument> args;
    for (size_t i = 0; i < a.args.size(); ++i) {
      if (generalize && i == 0) {
        args.emplace_back(fol::Term::Variable(var));
      } else {
        args.emplace_back(fol::Term::Constant(a.args[i]));
      }
    }
    return fol::Formula::Atom(a.predicate, std::move(args));
  };
  return fol::Formula::Forall(
      var, fol::Formula::Implies(build(antecedent), build(consequent)));
}

std::vector<BackgroundFact> Pipeline::RetrieveBackground(
    const std::vector<PropertyAtom>& atoms,
    const std::vector<ReferringExpression>& entities,
    const std::vector<EntityRelation>& relations, const std::string& context,
    std::vector<llm::NliJudgment>& judgments) {
  std::vector<BackgroundFact> facts;
  auto test = [&](const PropertyAtom& a, const PropertyAtom& b) {
    llm::NliJudgment j =
        gateway_.Entails(SurfaceForm(a, entities), SurfaceForm(b, entities), context);
    judgments.push_back(j);
    if (j.label == llm::NliLabel::kEntailment) {
      facts.push_back(BackgroundFact{a, b, j, RealizeFact(a, b, relations)});
    }
  };
  for (size_t i = 0; i < atoms.size(); ++i) {
    for (size_t j = i + 1; j < atoms.size(); ++j) {
      test(atoms[j], atoms[i]);
      test(atoms[i], atoms[j]);
    }
  }
  return facts;
}

fol::Formula Pipeline::FormulateSentence(
    SentenceForm& form, const std::vector<ReferringExpression>& entities,
    const std::vector<EntityRelation>& relations) {
  llm::Bindings b = {
      {"sentence", form.sentence},
      {"referring_expressions", RenderEntities(entities)},
      {"properties", form.properties.empty() ? "(none)" : RenderAtoms(form.properties)},
      {"relations", RenderRelations(relations, entities)}};
  std::string appendix;
  std::string last_error;
  for (int attempt = 0; attempt <= options_.fol_retries; ++attempt) {
    form.attempts = attempt + 1;
    form.response = gateway_.Complete("fol_formulation", b, appendix);
    std::string text = ExtractLogicalForm(form.response);
    try {
      fol::Formula f = fol::ParseFormula(text);
      form.formula = f;
      return f;
    } catch (const fol::SyntaxError& e) {
      last_error = e.what();
      appendix = "\n\nThe logical form `" + text + "` could not be parsed (" +
                 last_error + "). Reply with one corrected Logical Form.";
    }
  }
  throw StageFailure(kStageFol, "unparseable logical form for \"" +
                                    form.sentence + "\": " + last_error);
}

fol::Formula AssembleFormula(const std::vector<BackgroundFact>& facts,
                             const std::vector<fol::Formula>& claims,
                             const fol::Formula& implication) {
  std::vector<fol::Formula> parts;
  for (const BackgroundFact& f : facts) parts.push_back(f.realized);
  for (const fol::Formula& c : claims) {
    for (const fol::Formula& part : fol::Conjuncts(c)) parts.push_back(part);
  }
  if (parts.empty()) return fol::AlphaNormalize(implication);
  return fol::AlphaNormalize(
      fol::Formula::Implies(fol::Formula::Conjunction(parts), implication));
}

Classification ClassificationFor(const solver::SolverOutcome& outcome) {
  switch (outcome.verdict) {
    case solver::Verdict::kSat:
      return Classification::Fallacy();
    case solver::Verdict::kUnsat:
      return Classification::Valid();
    case solver::Verdict::kUnknown:
      return Classification::Inconclusive(InconclusiveReason::kUnknown,
                                          kStageSolve, "solver answered unknown");
    case solver::Verdict::kTimeout:
      return Classification::Inconclusive(InconclusiveReason::kTimeout,
                                          kStageSolve, "solver timed out");
    case solver::Verdict::kSolverError:
      break;
  }
  return Classification::Inconclusive(InconclusiveReason::kSolverError,
                                      kStageSolve, outcome.error);
}

std::string Pipeline::InterpretCounterexample(const solver::Model& model,
                                              PipelineTrace& trace) {
  const smt::Signature empty;
  trace.counterexample = RenderCounterexample(
      model, trace.compilation ? trace.compilation->signature : empty);
  trace.explanation.clear();
  trace.explanation_fallback = true;
  if (!options_.interpret) return trace.counterexample;
  std::string claims = "(none)";
  std::string implication;
  if (trace.claim_implication) {
    if (!trace.claim_implication->claims.empty()) {
      claims.clear();
      for (const std::string& c : trace.claim_implication->claims) {
        claims += (claims.empty() ? "" : " ") + c;
      }
    }
    implication = trace.claim_implication->implication;
  }
  try {
    trace.explanation = gateway_.Complete(
        "interpret", {{"claims", claims},
                      {"implication", implication},
                      {"referring_expressions", RenderEntities(trace.entities)},
                      {"properties", RenderAtoms(trace.atoms)},
                      {"formula", trace.fol_text},
                      {"counterexample", trace.counterexample}});
    trace.explanation_fallback = false;
    return trace.explanation;
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    trace.warnings.push_back(std::string("interpretation unavailable: ") +
                             e.what());
    return trace.counterexample;
  }
}

PipelineTrace Pipeline::Classify(const std::string& text) {
  PipelineTrace trace;
  trace.input = text;
  trace.config = ConfigSnapshot();
  for (const std::string& s : StageNames()) trace.stage_status[s] = "skipped";

  std::string stage;
  StageTimer timer;
  auto begin = [&](const char* name) {
    stage = name;
    timer = StageTimer();
  };
  auto done = [&] {
    trace.stage_status[stage] = "ok";
    if (options_.record_timings) trace.timings[stage] = timer.Seconds();
  };

  try {
    if (TrimCopy(text).empty()) {
      stage = kStageClaimImplication;
      throw StageFailure(kStageClaimImplication, "empty input");
    }
    begin(kStageClaimImplication);
    trace.claim_implication = ParseClaimImplication(text, trace.warnings);
    done();

    begin(kStageEntities);
    trace.entities = ExtractEntities(*trace.claim_implication, trace.warnings);
    done();

    begin(kStageRelations);
    trace.relations = ClassifyEntityRelations(trace.entities, trace.warnings);
    done();

    begin(kStageProperties);
    trace.sentences = ExtractProperties(*trace.claim_implication, trace.entities,
                                        trace.warnings);
    trace.atoms = CollectAtoms(trace.sentences);
    done();

    begin(kStageBackground);
    trace.facts = RetrieveBackground(trace.atoms, trace.entities, trace.relations,
                                     text, trace.judgments);
    for (const llm::NliJudgment& j : trace.judgments) {
      if (!j.warning.empty()) {
        trace.warnings.push_back(j.premise + " => " + j.hypothesis + ": " +
                                 j.warning);
      }
    }
    done();

    begin(kStageFol);
    std::vector<fol::Formula> claims;
    for (SentenceForm& form : trace.sentences) {
      fol::Formula f = FormulateSentence(form, trace.entities, trace.relations);
      if (form.source == AtomSource::kClaim) claims.push_back(f);
    }
    trace.formula =
        AssembleFormula(trace.facts, claims, *trace.sentences.back().formula);
    trace.fol_text = fol::PrettyPrint(*trace.formula);
    done();

    begin(kStageCompile);
    trace.compilation = smt::Compile(*trace.formula);
    for (const std::string& w : trace.compilation->warnings) {
      trace.warnings.push_back(w);
    }
    done();

    begin(kStageSolve);
    trace.outcome = solver::RunSolver(trace.compilation->script, solver_);
    trace.classification = ClassificationFor(*trace.outcome);
    done();
    if (!options_.record_timings) trace.outcome->wall_seconds = 0.0;

    if (trace.outcome->verdict == solver::Verdict::kSat && trace.outcome->model) {
      begin(kStageInterpret);
      InterpretCounterexample(*trace.outcome->model, trace);
      done();
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    trace.stage_status[stage] = "failed";
    std::string failed = stage;
    if (const auto* sf = dynamic_cast<const StageFailure*>(&e)) failed = sf->stage();
    trace.classification = Classification::Inconclusive(
        InconclusiveReason::kStageFailure, failed, e.what());
  }
  return trace;
}

Classification BaselineClassify(llm::Gateway& gateway, const std::string& text,
                                std::string* raw) {
  try {
    std::string answer = gateway.Complete("end_to_end", {{"input", text}});
    if (raw != nullptr) *raw = answer;
    std::optional<Classification::Label> label = ParseEndToEndAnswer(answer);
    if (!label) {
      return Classification::Inconclusive(InconclusiveReason::kStageFailure,
                                          "end_to_end", "unrecognized answer");
    }
    return *label == Classification::Label::kFallacy ? Classification::Fallacy()
                                                     : Classification::Valid();
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    return Classification::Inconclusive(InconclusiveReason::kStageFailure,
                                        "end_to_end", e.what());
  }
}

}  // namespace nl2fol::pipeline
