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

// Running an external SMT-LIB solver and reading its models.

#ifndef NL2FOL_SOLVER_SOLVER_H_
#define NL2FOL_SOLVER_SOLVER_H_

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nl2fol/smt/compiler.h"
#include "nl2fol/util/error.h"

namespace nl2fol::solver {

class ModelParseError : public Error {
 public:
  using Error::Error;
};

enum class Verdict { kSat, kUnsat, kUnknown, kTimeout, kSolverError };

// "SAT", "UNSAT", "UNKNOWN", "TIMEOUT", "SOLVER_ERROR".
std::string_view VerdictName(Verdict v);
// Inverse of VerdictName; throws Error on anything else.
Verdict ParseVerdict(std::string_view name);

enum class SolverFamily { kCvc, kZ3, kOther };

struct SolverConfig {
  std::string executable;
  std::vector<std::string> extra_args;
  double timeout_seconds = 10.0;
  bool finite_model_find = true;

  // Executable from NL2FOL_SOLVER, else the first of cvc5, cvc4, z3 on PATH.
  static SolverConfig FromEnvironment();

  // Throws ConfigError unless timeout > 0 and the executable is runnable.
  void Validate() const;
};

SolverFamily DetectFamily(std::string_view executable);

// Full argv for solving `script_path`.
std::vector<std::string> SolverCommand(const SolverConfig& cfg,
                                       const std::string& script_path);

struct Model {
  struct Row {
    std::vector<std::string> args;
    std::string value;

    friend bool operator==(const Row&, const Row&) = default;
  };

  struct Definition {
    std::string symbol;  // source-level name
    std::vector<std::string> arg_sorts;
    std::string result_sort;
    // Constants have one row with no args. Predicates have one row per tuple
    // of domain elements. Empty when the body could not be evaluated.
    std::vector<Row> table;
    bool evaluated = false;
    std::string raw;  // the define-fun as printed by the solver

    friend bool operator==(const Definition&, const Definition&) = default;
  };

  // Elements of each uninterpreted sort, in order of discovery.
  std::map<std::string, std::vector<std::string>> domains;
  std::vector<Definition> definitions;
  std::vector<std::string> unparsed;  // fragments kept verbatim
  std::vector<std::string> warnings;

  const Definition* Find(std::string_view symbol) const;
  // Value of `symbol` at `args`; nullopt if unknown.
  std::optional<std::string> Value(std::string_view symbol,
                                   const std::vector<std::string>& args) const;

  friend bool operator==(const Model&, const Model&) = default;
};

struct SolverOutcome {
  Verdict verdict = Verdict::kSolverError;
  std::optional<Model> model;  // present iff verdict == kSat
  std::string raw;             // stdout of every phase, concatenated
  std::string stderr_text;
  double wall_seconds = 0.0;
  std::string error;           // detail for kSolverError
};

// Solves `script`. The check-sat run never requests a model; only a `sat`
// answer triggers a second run that retrieves and parses one.
SolverOutcome RunSolver(const smt::SmtScript& script, const SolverConfig& cfg);

// Solves a hand-written SMT-LIB script. Model retrieval follows the same
// two-phase rule: (get-model) commands are dropped from the check-sat run
// and the full text is rerun only after `sat`. Declared symbols are read
// from the script's declare-fun/declare-const lines.
SolverOutcome RunSolverOnText(const std::string& text, const SolverConfig& cfg);

// Parses the text following `sat` (a leading verdict line is skipped).
// Only symbols declared in `script` are reported as definitions. Throws
// ModelParseError when the s-expression structure is unbalanced.
Model ParseModel(std::string_view raw, const smt::SmtScript& script);

}  // namespace nl2fol::solver

#endif  // NL2FOL_SOLVER_SOLVER_H_
