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

// First-order formula trees.
//
// A Formula is an immutable value backed by a shared node, so copies are
// cheap and a formula can be handed to several threads at once. Terms are
// either bound variables or free constants; the parser decides which by
// scoping (a name is a variable iff an enclosing quantifier binds it).

#ifndef NL2FOL_FOL_AST_H_
#define NL2FOL_FOL_AST_H_

#include <map>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "nl2fol/util/error.h"

namespace nl2fol::fol {

// Two arities for one predicate name.
class ArityConflict : public Error {
 public:
  ArityConflict(std::string predicate, int first, int second);
  const std::string& predicate() const { return predicate_; }
  int first() const { return first_; }
  int second() const { return second_; }

 private:
  std::string predicate_;
  int first_;
  int second_;
};

// A substitution would place a name under a binder of the same name.
class CaptureError : public Error {
 public:
  using Error::Error;
};

// True iff `name` matches [A-Za-z][A-Za-z0-9_]*.
bool IsIdentifier(std::string_view name);

struct Term {
  enum class Kind { kVariable, kConstant };

  Kind kind = Kind::kConstant;
  std::string name;

  static Term Variable(std::string name) {
    return Term{Kind::kVariable, std::move(name)};
  }
  static Term Constant(std::string name) {
    return Term{Kind::kConstant, std::move(name)};
  }
  bool is_variable() const { return kind == Kind::kVariable; }

  friend bool operator==(const Term&, const Term&) = default;
};

enum class FormulaKind { kAtom, kNot, kAnd, kOr, kImplies, kForall, kExists };

class Formula;

// A predicate argument is a term or, in Bool-sorted slots, a nested formula.
using Argument = std::variant<Term, Formula>;

class Formula {
 public:
  static Formula Atom(std::string predicate, std::vector<Argument> args = {});
  static Formula Not(Formula operand);
  static Formula And(Formula lhs, Formula rhs);
  static Formula Or(Formula lhs, Formula rhs);
  static Formula Implies(Formula lhs, Formula rhs);
  static Formula Forall(std::string var, Formula body);
  static Formula Exists(std::string var, Formula body);

  // Left-leaning conjunction of `parts`; `parts` must be nonempty.
  static Formula Conjunction(std::span<const Formula> parts);

  FormulaKind kind() const;
  bool is_atom() const { return kind() == FormulaKind::kAtom; }
  bool is_binary() const;
  bool is_quantifier() const;

  // Atom accessors.
  const std::string& predicate() const;
  std::span<const Argument> args() const;

  // Not: operand(). Binary connectives: lhs(), rhs(). Quantifiers:
  // bound_variable(), body().
  const Formula& operand() const;
  const Formula& lhs() const;
  const Formula& rhs() const;
  const std::string& bound_variable() const;
  const Formula& body() const;

  // Structural equality.
  friend bool operator==(const Formula& a, const Formula& b);

 private:
  struct Node;
  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  std::shared_ptr<const Node> node_;
};

// Names of variables that occur outside the scope of any binder for them.
std::set<std::string> FreeVariables(const Formula& f);

// Names of all constants occurring in `f`.
std::set<std::string> Constants(const Formula& f);

// Predicate name -> arity, ordered by name. Throws ArityConflict.
std::map<std::string, int> CollectPredicates(const Formula& f);

// Replaces free occurrences of mapped names (free variables and constants).
// Bound occurrences are untouched. Throws CaptureError when a replacement
// would be captured by a binder in scope at the occurrence.
Formula Substitute(const Formula& f,
                   const std::map<std::string, std::string>& mapping);

// Renames binders so that no binder shadows an enclosing binder of the same
// name and no binder reuses the name of a constant. Renamed binders get the
// smallest numeric suffix that is unused anywhere in the formula.
Formula AlphaNormalize(const Formula& f);

// Flattens every And node reachable from the root through And nodes into
// the list of conjuncts, left to right. A non-And formula is its own list.
std::vector<Formula> Conjuncts(const Formula& f);

}  // namespace nl2fol::fol

#endif  // NL2FOL_FOL_AST_H_
