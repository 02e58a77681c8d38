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

#include "nl2fol/solver/solver.h"

#include <cstdlib>
#include <sstream>

#include "nl2fol/util/subprocess.h"

namespace nl2fol::solver {

std::string_view VerdictName(Verdict v) {
  switch (v) {
    case Verdict::kSat:
      return "SAT";
    case Verdict::kUnsat:
      return "UNSAT";
    case Verdict::kUnknown:
      return "UNKNOWN";
    case Verdict::kTimeout:
      return "TIMEOUT";
    case Verdict::kSolverError:
      break;
  }
  return "SOLVER_ERROR";
}

Verdict ParseVerdict(std::string_view name) {
  for (Verdict v : {Verdict::kSat, Verdict::kUnsat, Verdict::kUnknown,
                    Verdict::kTimeout, Verdict::kSolverError}) {
    if (VerdictName(v) == name) return v;
  }
  throw Error("unknown verdict '" + std::string(name) + "'");
}

SolverFamily DetectFamily(std::string_view executable) {
  size_t slash = executable.rfind('/');
  std::string_view base =
      slash == std::string_view::npos ? executable : executable.substr(slash + 1);
  if (base.find("cvc") != std::string_view::npos) return SolverFamily::kCvc;
  if (base.find("z3") != std::string_view::npos) return SolverFamily::kZ3;
  return SolverFamily::kOther;
}

SolverConfig SolverConfig::FromEnvironment() {
  SolverConfig cfg;
  if (const char* env = std::getenv("NL2FOL_SOLVER"); env != nullptr && *env) {
    cfg.executable = env;
    return cfg;
  }
  for (const char* name : {"cvc5", "cvc4", "z3"}) {
    if (FindExecutable(name)) {
      cfg.executable = name;
      break;
    }
  }
  return cfg;
}

void SolverConfig::Validate() const {
  if (!(timeout_seconds > 0)) {
    throw ConfigError("solver timeout must be positive");
  }
  if (executable.empty()) {
    throw ConfigError(
        "no SMT solver found; install cvc5, cvc4 or z3, or set NL2FOL_SOLVER");
  }
  if (!FindExecutable(executable)) {
    throw ConfigError("solver executable not found or not runnable: " +
                      executable);
  }
}

std::vector<std::string> SolverCommand(const SolverConfig& cfg,
                                       const std::string& script_path) {
  std::vector<std::string> argv = {cfg.executable};
  switch (DetectFamily(cfg.executable)) {
    case SolverFamily::kCvc:
      argv.push_back("--lang=smt2");
      argv.push_back("--produce-models");
      if (cfg.finite_model_find) argv.push_back("--finite-model-find");
      break;
    case SolverFamily::kZ3:
      argv.push_back("-smt2");
      if (cfg.finite_model_find) argv.push_back("smt.mbqi=true");
      break;
    case SolverFamily::kOther:
      break;
  }
  argv.insert(argv.end(), cfg.extra_args.begin(), cfg.extra_args.end());
  argv.push_back(script_path);
  return argv;
}

namespace {

struct Phase {
  Verdict verdict = Verdict::kSolverError;
  std::string rest;  // stdout after the verdict line
  std::string error;
};

std::string Trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

Phase RunPhase(const std::string& text, const SolverConfig& cfg,
               SolverOutcome& outcome) {
  TempFile file(text, ".smt2");
  ProcessResult r = RunProcess(SolverCommand(cfg, file.path()),
                               std::chrono::duration<double>(cfg.timeout_seconds));
  outcome.raw += r.stdout_text;
  outcome.stderr_text += r.stderr_text;
  outcome.wall_seconds += r.wall_time.count();

  Phase phase;
  if (!r.started) {
    phase.error = r.stderr_text;
    return phase;
  }
  if (r.timed_out) {
    phase.verdict = Verdict::kTimeout;
    return phase;
  }
  std::istringstream in(r.stdout_text);
  std::string line, first;
  while (std::getline(in, line)) {
    first = Trim(line);
    if (!first.empty()) break;
  }
  std::string rest;
  std::getline(in, rest, '\0');

  if (size_t pos = r.stdout_text.find("(error"); pos != std::string::npos) {
    size_t end = r.stdout_text.find('\n', pos);
    phase.error = r.stdout_text.substr(pos, end == std::string::npos
                                                ? std::string::npos
                                                : end - pos);
    return phase;
  }
  if (first == "sat") {
    phase.verdict = Verdict::kSat;
  } else if (first == "unsat") {
    phase.verdict = Verdict::kUnsat;
  } else if (first == "unknown") {
    phase.verdict = Verdict::kUnknown;
  } else if (r.term_signal != 0) {
    phase.error = "solver killed by signal " + std::to_string(r.term_signal);
  } else if (r.exit_code != 0) {
    phase.error = "solver exited with status " + std::to_string(r.exit_code) +
                  ": " + Trim(r.stderr_text);
  } else {
    phase.error = "solver produced no verdict";
  }
  phase.rest = std::move(rest);
  return phase;
}

}  // namespace

SolverOutcome RunSolver(const smt::SmtScript& script, const SolverConfig& cfg) {
  SolverOutcome outcome;
  Phase check = RunPhase(script.ToStringWithoutModelRequest(), cfg, outcome);
  outcome.verdict = check.verdict;
  outcome.error = check.error;
  if (check.verdict != Verdict::kSat) return outcome;

  Model model;
  Phase full = RunPhase(script.ToString(), cfg, outcome);
  if (full.verdict != Verdict::kSat) {
    model.warnings.push_back(
        "model retrieval failed (" + std::string(VerdictName(full.verdict)) +
        (full.error.empty() ? "" : ": " + full.error) + ")");
  } else {
    try {
      model = ParseModel(full.rest, script);
    } catch (const ModelParseError& e) {
      model.warnings.push_back(e.what());
      model.unparsed.push_back(full.rest);
    }
  }
  outcome.model = std::move(model);
  return outcome;
}

SolverOutcome RunSolverOnText(const std::string& text, const SolverConfig& cfg) {
  smt::SmtScript declared;
  std::string check_text;
  bool wants_model = false;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::string t = Trim(line);
    if (t.rfind("(get-model", 0) == 0) {
      wants_model = true;
      continue;
    }
    for (const char* head : {"(declare-fun ", "(declare-const "}) {
      if (t.rfind(head, 0) == 0) {
        std::istringstream words(t.substr(std::string(head).size()));
        std::string name;
        words >> name;
        declared.declared_symbols.push_back(name);
      }
    }
    check_text += line + "\n";
  }
  SolverOutcome outcome;
  Phase check = RunPhase(check_text, cfg, outcome);
  outcome.verdict = check.verdict;
  outcome.error = check.error;
  if (check.verdict != Verdict::kSat || !wants_model) return outcome;
  Model model;
  Phase full = RunPhase(text, cfg, outcome);
  if (full.verdict != Verdict::kSat) {
    model.warnings.push_back("model retrieval failed (" +
                             std::string(VerdictName(full.verdict)) + ")");
  } else {
    try {
      model = ParseModel(full.rest, declared);
    } catch (const ModelParseError& e) {
      model.warnings.push_back(e.what());
      model.unparsed.push_back(full.rest);
    }
  }
  outcome.model = std::move(model);
  return outcome;
}

}  // namespace nl2fol::solver
