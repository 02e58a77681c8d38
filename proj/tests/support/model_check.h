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

#ifndef NL2FOL_TESTS_SUPPORT_MODEL_CHECK_H_
#define NL2FOL_TESTS_SUPPORT_MODEL_CHECK_H_

#include <map>
#include <optional>
#include <string>

#include "nl2fol/fol/ast.h"
#include "nl2fol/smt/compiler.h"
#include "nl2fol/solver/solver.h"

namespace nl2fol::testing {

// Evaluates `f` in a finite model read back from the solver. Quantifiers
// range over the model's domain for the bound variable's sort. Returns
// nullopt when the model lacks something needed for the evaluation.
class ModelChecker {
 public:
  ModelChecker(const smt::Signature& sig, const solver::Model& model)
      : sig_(sig), model_(model) {}

  std::optional<bool> Eval(const fol::Formula& f) { return Eval(f, {}); }

 private:
  using Env = std::map<std::string, std::string>;

  std::optional<std::string> TermValue(const fol::Term& t, const Env& env) {
    auto it = env.find(t.name);
    if (it != env.end()) return it->second;
    return model_.Value(t.name, {});
  }

  std::optional<bool> Eval(const fol::Formula& f, const Env& env) {
    using K = fol::FormulaKind;
    switch (f.kind()) {
      case K::kAtom: {
        std::vector<std::string> args;
        for (const fol::Argument& a : f.args()) {
          if (const fol::Term* t = std::get_if<fol::Term>(&a)) {
            auto v = TermValue(*t, env);
            if (!v) return std::nullopt;
            args.push_back(*v);
          } else {
            auto v = Eval(std::get<fol::Formula>(a), env);
            if (!v) return std::nullopt;
            args.push_back(*v ? "true" : "false");
          }
        }
        auto v = model_.Value(f.predicate(), args);
        if (!v) return std::nullopt;
        return *v == "true";
      }
      case K::kNot: {
        auto v = Eval(f.operand(), env);
        if (!v) return std::nullopt;
        return !*v;
      }
      case K::kAnd:
      case K::kOr:
      case K::kImplies: {
        auto l = Eval(f.lhs(), env);
        auto r = Eval(f.rhs(), env);
        if (!l || !r) return std::nullopt;
        if (f.kind() == K::kAnd) return *l && *r;
        if (f.kind() == K::kOr) return *l || *r;
        return !*l || *r;
      }
      case K::kForall:
      case K::kExists: {
        const smt::SymbolSignature* s = sig_.FindSymbol(f.bound_variable());
        if (s == nullptr) return std::nullopt;
        auto d = model_.domains.find(s->sort.ToString());
        if (d == model_.domains.end() || d->second.empty()) return std::nullopt;
        const bool universal = f.kind() == K::kForall;
        for (const std::string& e : d->second) {
          Env inner = env;
          inner[f.bound_variable()] = e;
          auto v = Eval(f.body(), inner);
          if (!v) return std::nullopt;
          if (*v != universal) return !universal;
        }
        return universal;
      }
    }
    return std::nullopt;
  }

  const smt::Signature& sig_;
  const solver::Model& model_;
};

}  // namespace nl2fol::testing

#endif  // NL2FOL_TESTS_SUPPORT_MODEL_CHECK_H_
