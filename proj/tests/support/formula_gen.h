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

// Test-only generators for formulas and a brute-force truth-table oracle.
// Nothing here calls into the compiler or the solver runner.

#ifndef NL2FOL_TESTS_SUPPORT_FORMULA_GEN_H_
#define NL2FOL_TESTS_SUPPORT_FORMULA_GEN_H_

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "nl2fol/fol/ast.h"

namespace nl2fol::testing {

struct GenOptions {
  int max_depth = 5;
  // Include names such as `true` and `and` that need mangling in SMT-LIB.
  bool awkward_names = false;
  // Allow predicates whose single slot takes a nested formula.
  bool bool_slots = false;
  bool quantifiers = true;
};

// Generates alpha-normalized, arity-consistent, sort-consistent formulas:
// every Term is a Variable iff bound, binders never shadow and never reuse a
// constant's name.
class FormulaGenerator {
 public:
  FormulaGenerator(uint64_t seed, GenOptions options)
      : rng_(seed), options_(options) {
    predicates_ = {{"P", 0}, {"Q", 1}, {"R", 2}, {"Tall", 1}, {"Like", 2},
                   {"Rain", 0}, {"Between", 3}};
    constants_ = {"c", "bridge", "d0"};
    variables_ = {"x", "y", "z", "u", "v", "w"};
    if (options_.awkward_names) {
      predicates_.push_back({"and", 1});
      predicates_.push_back({"assert", 2});
      predicates_.push_back({"S0", 1});
      constants_.push_back("true");
      constants_.push_back("let");
      variables_.push_back("ite");
      variables_.push_back("distinct");
    }
  }

  fol::Formula Next() {
    scope_.clear();
    return Gen(0);
  }

 private:
  int Uniform(int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng_);
  }

  fol::Term GenTerm() {
    if (!scope_.empty() && Uniform(0, 3) != 0) {
      return fol::Term::Variable(scope_[Uniform(0, scope_.size() - 1)]);
    }
    return fol::Term::Constant(constants_[Uniform(0, constants_.size() - 1)]);
  }

  fol::Formula GenAtom(int depth) {
    if (options_.bool_slots && depth + 1 < options_.max_depth &&
        Uniform(0, 5) == 0) {
      return fol::Formula::Atom("Holds", {Gen(depth + 1)});
    }
    const auto& [name, arity] = predicates_[Uniform(0, predicates_.size() - 1)];
    std::vector<fol::Argument> args;
    for (int i = 0; i < arity; ++i) args.emplace_back(GenTerm());
    return fol::Formula::Atom(name, std::move(args));
  }

  fol::Formula Gen(int depth) {
    int choice = depth >= options_.max_depth ? 0 : Uniform(0, 6);
    switch (choice) {
      case 0:
      case 1:
        return GenAtom(depth);
      case 2:
        return fol::Formula::Not(Gen(depth + 1));
      case 3:
        return fol::Formula::And(Gen(depth + 1), Gen(depth + 1));
      case 4:
        return fol::Formula::Or(Gen(depth + 1), Gen(depth + 1));
      case 5:
        return fol::Formula::Implies(Gen(depth + 1), Gen(depth + 1));
      default: {
        if (!options_.quantifiers) return GenAtom(depth);
        std::vector<std::string> free;
        for (const std::string& v : variables_) {
          if (std::find(scope_.begin(), scope_.end(), v) == scope_.end()) {
            free.push_back(v);
          }
        }
        if (free.empty()) return GenAtom(depth);
        std::string var = free[Uniform(0, free.size() - 1)];
        scope_.push_back(var);
        fol::Formula body = Gen(depth + 1);
        scope_.pop_back();
        return Uniform(0, 1) ? fol::Formula::Forall(var, body)
                             : fol::Formula::Exists(var, body);
      }
    }
  }

  std::mt19937_64 rng_;
  GenOptions options_;
  std::vector<std::pair<std::string, int>> predicates_;
  std::vector<std::string> constants_;
  std::vector<std::string> variables_;
  std::vector<std::string> scope_;
};

// Random quantifier-free formula over at most `max_props` 0-ary predicates.
inline fol::Formula RandomPropositional(std::mt19937_64& rng, int max_props,
                                        int depth) {
  std::uniform_int_distribution<int> pick(0, 4);
  std::uniform_int_distribution<int> prop(0, max_props - 1);
  if (depth <= 0 || pick(rng) == 0) {
    return fol::Formula::Atom("p" + std::to_string(prop(rng)));
  }
  switch (pick(rng)) {
    case 1:
      return fol::Formula::Not(RandomPropositional(rng, max_props, depth - 1));
    case 2:
      return fol::Formula::And(RandomPropositional(rng, max_props, depth - 1),
                               RandomPropositional(rng, max_props, depth - 1));
    case 3:
      return fol::Formula::Or(RandomPropositional(rng, max_props, depth - 1),
                              RandomPropositional(rng, max_props, depth - 1));
    default:
      return fol::Formula::Implies(
          RandomPropositional(rng, max_props, depth - 1),
          RandomPropositional(rng, max_props, depth - 1));
  }
}

inline bool EvaluatePropositional(const fol::Formula& f,
                                  const std::map<std::string, bool>& env) {
  using fol::FormulaKind;
  switch (f.kind()) {
    case FormulaKind::kAtom:
      return env.at(f.predicate());
    case FormulaKind::kNot:
      return !EvaluatePropositional(f.operand(), env);
    case FormulaKind::kAnd:
      return EvaluatePropositional(f.lhs(), env) &&
             EvaluatePropositional(f.rhs(), env);
    case FormulaKind::kOr:
      return EvaluatePropositional(f.lhs(), env) ||
             EvaluatePropositional(f.rhs(), env);
    case FormulaKind::kImplies:
      return !EvaluatePropositional(f.lhs(), env) ||
             EvaluatePropositional(f.rhs(), env);
    default:
      throw std::logic_error("quantifier in propositional formula");
  }
}

// Validity by enumerating every assignment of the formula's propositions.
inline bool TruthTableValid(const fol::Formula& f) {
  std::vector<std::string> props;
  for (const auto& [name, arity] : fol::CollectPredicates(f)) {
    props.push_back(name);
  }
  const size_t rows = size_t{1} << props.size();
  for (size_t mask = 0; mask < rows; ++mask) {
    std::map<std::string, bool> env;
    for (size_t i = 0; i < props.size(); ++i) env[props[i]] = (mask >> i) & 1;
    if (!EvaluatePropositional(f, env)) return false;
  }
  return true;
}

// Malformed inputs: random token soup plus mutations of valid text.
class MalformedInputGenerator {
 public:
  explicit MalformedInputGenerator(uint64_t seed) : rng_(seed) {}

  std::string Next(const std::string& valid_seed) {
    static const std::vector<std::string> kPieces = {
        "(", ")", ",", "&", "|", "~", "->", "=>", "forall", "exists", ".",
        "P", "Q(x)", "x", "$", "#", "\xE2\x88\x80", "\xE2\x88\x83", "\xE2",
        " ", "9", "_a", "-", ">", "((", "))", "R(x,", "\xFF"};
    std::uniform_int_distribution<int> mode(0, 2);
    std::string out;
    if (mode(rng_) == 0 || valid_seed.empty()) {
      std::uniform_int_distribution<int> len(0, 24);
      std::uniform_int_distribution<size_t> piece(0, kPieces.size() - 1);
      for (int i = len(rng_); i > 0; --i) out += kPieces[piece(rng_)];
      return out;
    }
    out = valid_seed;
    std::uniform_int_distribution<int> edits(1, 4);
    for (int i = edits(rng_); i > 0 && !out.empty(); --i) {
      std::uniform_int_distribution<size_t> at(0, out.size() - 1);
      size_t p = at(rng_);
      switch (mode(rng_)) {
        case 0:
          out.erase(p, 1);
          break;
        case 1:
          out.insert(p, kPieces[at(rng_) % kPieces.size()]);
          break;
        default:
          out[p] = "()&|~,.$"[at(rng_) % 8];
          break;
      }
    }
    return out;
  }

 private:
  std::mt19937_64 rng_;
};

}  // namespace nl2fol::testing

#endif  // NL2FOL_TESTS_SUPPORT_FORMULA_GEN_H_
