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

// FOL -> SMT-LIB compilation.
//
// The compiler infers a many-sorted signature by unification, rewrites the
// formula in prefix form and emits a script that asserts the negation of
// the formula. A valid formula therefore yields `unsat`; `sat` comes with a
// model that is a counterexample.
//
// Sort inference works on union-find classes. Each predicate argument slot
// and each variable/constant is a node. A term argument joins its symbol's
// class with the slot's class; a nested formula argument forces the slot's
// class to Bool. A class that contains a symbol and is forced to Bool is an
// error. Classes that are not Bool become uninterpreted sorts S0, S1, ...
// numbered by first occurrence in a left-to-right pre-order walk.

#ifndef NL2FOL_SMT_COMPILER_H_
#define NL2FOL_SMT_COMPILER_H_

#include <string>
#include <string_view>
#include <vector>

#include "nl2fol/fol/ast.h"
#include "nl2fol/util/error.h"
#include "nl2fol/util/sexpr.h"

namespace nl2fol::smt {

class IncompatibleSorts : public Error {
 public:
  IncompatibleSorts(std::string predicate, int position);
  const std::string& predicate() const { return predicate_; }
  int position() const { return position_; }

 private:
  std::string predicate_;
  int position_;
};

// Internal consistency failure: the emitter met a name with no declaration.
class UndeclaredSymbol : public Error {
 public:
  using Error::Error;
};

struct Sort {
  enum class Kind { kBool, kUnresolved, kNamed };

  Kind kind = Kind::kUnresolved;
  int id = -1;  // class id while unresolved, sort index once named

  static Sort Bool() { return Sort{Kind::kBool, -1}; }
  static Sort Named(int index) { return Sort{Kind::kNamed, index}; }

  // "Bool", "S3", or "?7" for an unresolved class.
  std::string ToString() const;

  friend bool operator==(const Sort&, const Sort&) = default;
};

struct PredicateSignature {
  std::string name;
  std::vector<Sort> arg_sorts;  // result sort is always Bool

  friend bool operator==(const PredicateSignature&,
                         const PredicateSignature&) = default;
};

struct SymbolSignature {
  std::string name;
  Sort sort;
  bool bound = false;  // occurs as a quantified variable
  bool free = false;   // occurs outside any binder for it; gets declared

  friend bool operator==(const SymbolSignature&,
                         const SymbolSignature&) = default;
};

// Inferred sorts. Entries are kept in first-occurrence order.
struct Signature {
  int sort_count = 0;
  std::vector<PredicateSignature> predicates;
  std::vector<SymbolSignature> symbols;

  const PredicateSignature* FindPredicate(std::string_view name) const;
  const SymbolSignature* FindSymbol(std::string_view name) const;

  friend bool operator==(const Signature&, const Signature&) = default;
};

struct SmtScript {
  std::string logic = "UF";
  std::vector<std::string> sort_declarations;
  std::vector<std::string> function_declarations;
  std::string assertion;  // "(assert (not ...))"
  std::vector<std::string> commands;
  // SMT-level names of every declared function symbol, in declaration order.
  std::vector<std::string> declared_symbols;

  // Byte-exact script text: one item per line, each line ending in '\n'.
  std::string ToString() const;
  // Same script without the trailing (get-model).
  std::string ToStringWithoutModelRequest() const;
};

// Throws IncompatibleSorts (and fol::ArityConflict).
Signature UnifySorts(const fol::Formula& f);

// The name used for `name` in SMT-LIB text. Names that clash with SMT-LIB
// reserved words or Core symbols get a leading underscore.
std::string SmtSymbol(std::string_view name);
// Inverse of SmtSymbol.
std::string SourceSymbol(std::string_view smt_name);

// Prefix form with sorted binder lists, e.g.
// (forall ((x S0)) (=> (Tall x) (Like x c))).
SExpr ToPrefix(const fol::Formula& f, const Signature& sig);

// Throws UndeclaredSymbol if `sig` does not cover `f`.
SmtScript EmitSmt(const fol::Formula& f, const Signature& sig);

struct Compilation {
  fol::Formula formula;
  Signature signature;
  SmtScript script;
  std::vector<std::string> warnings;
};

// Arity check, unification and emission in one step.
Compilation Compile(const fol::Formula& f);

// ParseFormula + Compile.
Compilation CompileText(std::string_view fol_text);

}  // namespace nl2fol::smt

#endif  // NL2FOL_SMT_COMPILER_H_
