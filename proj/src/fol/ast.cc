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

#include "nl2fol/fol/ast.h"

#include <cassert>
#include <cctype>
#include <functional>
#include <utility>

namespace nl2fol::fol {

ArityConflict::ArityConflict(std::string predicate, int first, int second)
    : Error("arity conflict: predicate '" + predicate + "' used with " +
            std::to_string(first) + " and " + std::to_string(second) +
            " arguments"),
      predicate_(std::move(predicate)),
      first_(first),
      second_(second) {}

bool IsIdentifier(std::string_view name) {
  if (name.empty() || !std::isalpha(static_cast<unsigned char>(name[0]))) {
    return false;
  }
  for (char c : name) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  }
  return true;
}

struct Formula::Node {
  FormulaKind kind;
  std::string name;  // predicate or bound variable
  std::vector<Argument> args;
  std::vector<Formula> children;
};

Formula Formula::Atom(std::string predicate, std::vector<Argument> args) {
  return Formula(std::make_shared<const Node>(
      Node{FormulaKind::kAtom, std::move(predicate), std::move(args), {}}));
}

Formula Formula::Not(Formula operand) {
  return Formula(std::make_shared<const Node>(
      Node{FormulaKind::kNot, {}, {}, {std::move(operand)}}));
}

Formula Formula::And(Formula lhs, Formula rhs) {
  return Formula(std::make_shared<const Node>(
      Node{FormulaKind::kAnd, {}, {}, {std::move(lhs), std::move(rhs)}}));
}

Formula Formula::Or(Formula lhs, Formula rhs) {
  return Formula(std::make_shared<const Node>(
      Node{FormulaKind::kOr, {}, {}, {std::move(lhs), std::move(rhs)}}));
}

Formula Formula::Implies(Formula lhs, Formula rhs) {
  return Formula(std::make_shared<const Node>(
      Node{FormulaKind::kImplies, {}, {}, {std::move(lhs), std::move(rhs)}}));
}

Formula Formula::Forall(std::string var, Formula body) {
  return Formula(std::make_shared<const Node>(
      Node{FormulaKind::kForall, std::move(var), {}, {std::move(body)}}));
}

Formula Formula::Exists(std::string var, Formula body) {
  return Formula(std::make_shared<const Node>(
      Node{FormulaKind::kExists, std::move(var), {}, {std::move(body)}}));
}

Formula Formula::Conjunction(std::span<const Formula> parts) {
  assert(!parts.empty());
  Formula result = parts.front();
  for (size_t i = 1; i < parts.size(); ++i) result = And(result, parts[i]);
  return result;
}

FormulaKind Formula::kind() const { return node_->kind; }

bool Formula::is_binary() const {
  FormulaKind k = kind();
  return k == FormulaKind::kAnd || k == FormulaKind::kOr ||
         k == FormulaKind::kImplies;
}

bool Formula::is_quantifier() const {
  return kind() == FormulaKind::kForall || kind() == FormulaKind::kExists;
}

const std::string& Formula::predicate() const {
  assert(is_atom());
  return node_->name;
}

std::span<const Argument> Formula::args() const { return node_->args; }

const Formula& Formula::operand() const {
  assert(kind() == FormulaKind::kNot);
  return node_->children[0];
}

const Formula& Formula::lhs() const {
  assert(is_binary());
  return node_->children[0];
}

const Formula& Formula::rhs() const {
  assert(is_binary());
  return node_->children[1];
}

const std::string& Formula::bound_variable() const {
  assert(is_quantifier());
  return node_->name;
}

const Formula& Formula::body() const {
  assert(is_quantifier());
  return node_->children[0];
}

bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  const Formula::Node& x = *a.node_;
  const Formula::Node& y = *b.node_;
  return x.kind == y.kind && x.name == y.name && x.args == y.args &&
         x.children == y.children;
}

namespace {

// Visits every term with the set of names bound at that point.
void VisitTerms(
    const Formula& f, std::vector<std::string>& scope,
    const std::function<void(const Term&, const std::vector<std::string>&)>&
        visit) {
  switch (f.kind()) {
    case FormulaKind::kAtom:
      for (const Argument& arg : f.args()) {
        if (const Term* t = std::get_if<Term>(&arg)) {
          visit(*t, scope);
        } else {
          VisitTerms(std::get<Formula>(arg), scope, visit);
        }
      }
      return;
    case FormulaKind::kNot:
      VisitTerms(f.operand(), scope, visit);
      return;
    case FormulaKind::kAnd:
    case FormulaKind::kOr:
    case FormulaKind::kImplies:
      VisitTerms(f.lhs(), scope, visit);
      VisitTerms(f.rhs(), scope, visit);
      return;
    case FormulaKind::kForall:
    case FormulaKind::kExists:
      scope.push_back(f.bound_variable());
      VisitTerms(f.body(), scope, visit);
      scope.pop_back();
      return;
  }
}

bool InScope(const std::vector<std::string>& scope, const std::string& name) {
  for (const std::string& s : scope) {
    if (s == name) return true;
  }
  return false;
}

void CollectAllNames(const Formula& f, std::set<std::string>& out) {
  switch (f.kind()) {
    case FormulaKind::kAtom:
      out.insert(f.predicate());
      for (const Argument& arg : f.args()) {
        if (const Term* t = std::get_if<Term>(&arg)) {
          out.insert(t->name);
        } else {
          CollectAllNames(std::get<Formula>(arg), out);
        }
      }
      return;
    case FormulaKind::kNot:
      CollectAllNames(f.operand(), out);
      return;
    case FormulaKind::kAnd:
    case FormulaKind::kOr:
    case FormulaKind::kImplies:
      CollectAllNames(f.lhs(), out);
      CollectAllNames(f.rhs(), out);
      return;
    case FormulaKind::kForall:
    case FormulaKind::kExists:
      out.insert(f.bound_variable());
      CollectAllNames(f.body(), out);
      return;
  }
}

Formula Rebuild(const Formula& f, std::vector<Formula> children) {
  switch (f.kind()) {
    case FormulaKind::kNot:
      return Formula::Not(std::move(children[0]));
    case FormulaKind::kAnd:
      return Formula::And(std::move(children[0]), std::move(children[1]));
    case FormulaKind::kOr:
      return Formula::Or(std::move(children[0]), std::move(children[1]));
    case FormulaKind::kImplies:
      return Formula::Implies(std::move(children[0]), std::move(children[1]));
    default:
      assert(false);
      return f;
  }
}

}  // namespace

std::set<std::string> FreeVariables(const Formula& f) {
  std::set<std::string> out;
  std::vector<std::string> scope;
  VisitTerms(f, scope,
             [&](const Term& t, const std::vector<std::string>& bound) {
               if (t.is_variable() && !InScope(bound, t.name)) {
                 out.insert(t.name);
               }
             });
  return out;
}

std::set<std::string> Constants(const Formula& f) {
  std::set<std::string> out;
  std::vector<std::string> scope;
  VisitTerms(f, scope, [&](const Term& t, const std::vector<std::string>&) {
    if (!t.is_variable()) out.insert(t.name);
  });
  return out;
}

std::map<std::string, int> CollectPredicates(const Formula& f) {
  std::map<std::string, int> arities;
  std::function<void(const Formula&)> walk = [&](const Formula& g) {
    switch (g.kind()) {
      case FormulaKind::kAtom: {
        int arity = static_cast<int>(g.args().size());
        auto [it, inserted] = arities.emplace(g.predicate(), arity);
        if (!inserted && it->second != arity) {
          throw ArityConflict(g.predicate(), it->second, arity);
        }
        for (const Argument& arg : g.args()) {
          if (const Formula* nested = std::get_if<Formula>(&arg)) walk(*nested);
        }
        return;
      }
      case FormulaKind::kNot:
        walk(g.operand());
        return;
      case FormulaKind::kAnd:
      case FormulaKind::kOr:
      case FormulaKind::kImplies:
        walk(g.lhs());
        walk(g.rhs());
        return;
      case FormulaKind::kForall:
      case FormulaKind::kExists:
        walk(g.body());
        return;
    }
  };
  walk(f);
  return arities;
}

Formula Substitute(const Formula& f,
                   const std::map<std::string, std::string>& mapping) {
  std::vector<std::string> scope;
  std::function<Formula(const Formula&)> walk =
      [&](const Formula& g) -> Formula {
    switch (g.kind()) {
      case FormulaKind::kAtom: {
        std::vector<Argument> args;
        args.reserve(g.args().size());
        for (const Argument& arg : g.args()) {
          if (const Term* t = std::get_if<Term>(&arg)) {
            auto it = mapping.find(t->name);
            if (it == mapping.end() || InScope(scope, t->name)) {
              args.emplace_back(*t);
              continue;
            }
            if (InScope(scope, it->second)) {
              throw CaptureError("substituting '" + it->second + "' for '" +
                                 t->name + "' would be captured by a binder");
            }
            args.emplace_back(Term{t->kind, it->second});
          } else {
            args.emplace_back(walk(std::get<Formula>(arg)));
          }
        }
        return Formula::Atom(g.predicate(), std::move(args));
      }
      case FormulaKind::kNot:
        return Formula::Not(walk(g.operand()));
      case FormulaKind::kAnd:
      case FormulaKind::kOr:
      case FormulaKind::kImplies:
        return Rebuild(g, {walk(g.lhs()), walk(g.rhs())});
      case FormulaKind::kForall:
      case FormulaKind::kExists: {
        scope.push_back(g.bound_variable());
        Formula body = walk(g.body());
        scope.pop_back();
        return g.kind() == FormulaKind::kForall
                   ? Formula::Forall(g.bound_variable(), std::move(body))
                   : Formula::Exists(g.bound_variable(), std::move(body));
      }
    }
    return g;
  };
  return walk(f);
}

Formula AlphaNormalize(const Formula& f) {
  std::set<std::string> used;
  CollectAllNames(f, used);
  const std::set<std::string> constants = Constants(f);

  // Original binder name -> stack of names currently in effect.
  std::map<std::string, std::vector<std::string>> renames;
  std::vector<std::string> active;  // effective binder names in scope

  auto fresh = [&](const std::string& base) {
    for (int i = 1;; ++i) {
      std::string candidate = base + std::to_string(i);
      if (!used.count(candidate)) {
        used.insert(candidate);
        return candidate;
      }
    }
  };

  std::function<Formula(const Formula&)> walk =
      [&](const Formula& g) -> Formula {
    switch (g.kind()) {
      case FormulaKind::kAtom: {
        std::vector<Argument> args;
        args.reserve(g.args().size());
        for (const Argument& arg : g.args()) {
          if (const Term* t = std::get_if<Term>(&arg)) {
            auto it = renames.find(t->name);
            if (t->is_variable() && it != renames.end() && !it->second.empty()) {
              args.emplace_back(Term::Variable(it->second.back()));
            } else {
              args.emplace_back(*t);
            }
          } else {
            args.emplace_back(walk(std::get<Formula>(arg)));
          }
        }
        return Formula::Atom(g.predicate(), std::move(args));
      }
      case FormulaKind::kNot:
        return Formula::Not(walk(g.operand()));
      case FormulaKind::kAnd:
      case FormulaKind::kOr:
      case FormulaKind::kImplies:
        return Rebuild(g, {walk(g.lhs()), walk(g.rhs())});
      case FormulaKind::kForall:
      case FormulaKind::kExists: {
        const std::string& original = g.bound_variable();
        std::string name = original;
        if (InScope(active, name) || constants.count(name)) name = fresh(name);
        renames[original].push_back(name);
        active.push_back(name);
        Formula body = walk(g.body());
        active.pop_back();
        renames[original].pop_back();
        return g.kind() == FormulaKind::kForall
                   ? Formula::Forall(name, std::move(body))
                   : Formula::Exists(name, std::move(body));
      }
    }
    return g;
  };
  return walk(f);
}

std::vector<Formula> Conjuncts(const Formula& f) {
  if (f.kind() != FormulaKind::kAnd) return {f};
  std::vector<Formula> out = Conjuncts(f.lhs());
  std::vector<Formula> right = Conjuncts(f.rhs());
  out.insert(out.end(), right.begin(), right.end());
  return out;
}

}  // namespace nl2fol::fol
