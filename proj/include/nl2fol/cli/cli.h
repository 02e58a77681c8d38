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

// The `nl2fol` command line.
//
//   nl2fol compile  FOL | --file F [-o OUT]   formula -> SMT-LIB
//   nl2fol solve    FILE.smt2                 run the solver on a script
//   nl2fol classify TEXT | --file F           full pipeline
//   nl2fol explain  TEXT | --trace T          counterexample and explanation
//   nl2fol eval     DATASET... [--sample N] [--baseline end_to_end]
//   nl2fol baseline TEXT | --file F           single-prompt classifier
//
// Exit codes:
//   0  success; classify/explain/baseline: VALID
//   1  classify/explain/baseline: FALLACY
//   2  compile: syntax error
//   3  compile: sort or arity error; solve: solver error; I/O error
//   4  INCONCLUSIVE; solve: unknown or timeout
//   5  configuration error
//   64 usage error

#ifndef NL2FOL_CLI_CLI_H_
#define NL2FOL_CLI_CLI_H_

#include <ostream>
#include <string>
#include <vector>

#include "nl2fol/cli/config.h"

namespace nl2fol::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValid = 0;
inline constexpr int kExitFallacy = 1;
inline constexpr int kExitSyntax = 2;
inline constexpr int kExitSort = 3;
inline constexpr int kExitSolverError = 3;
inline constexpr int kExitIo = 3;
inline constexpr int kExitInconclusive = 4;
inline constexpr int kExitConfig = 5;
inline constexpr int kExitUsage = 64;

// `args` excludes the program name. `env` supplies environment variables.
int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err, const EnvLookup& env);

}  // namespace nl2fol::cli

#endif  // NL2FOL_CLI_CLI_H_
