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

#include "nl2fol/smt/compiler.h"

#include <algorithm>
#include <map>
#include <set>
#include <unordered_map>

#include "nl2fol/fol/parser.h"

namespace nl2fol::smt {

using fol::Argument;
using fol::Formula;
using fol::FormulaKind;
using fol::Term;

IncompatibleSorts::IncompatibleSorts(std::string predicate, int position)
    : Error("incompatible sorts: argument " + std::to_string(position) +
            " of " + predicate + " is used both as a formula and as a term"),
      predicate_(std::move(predicate)),
      position_(position) {}

std::string Sort::ToString() const {
  switch (kind) {
    case Kind::kBool:
      return "Bool";
    case Kind::kNamed:
      return "S" + std::to_string(id);
    case Kind::kUnresolved:
      break;
  }
  return "?" + std::to_string(id);
}

const PredicateSignature* Signature::FindPredicate(std::string_view name) const {
  for (const PredicateSignature& p : predicates) {
    if (p.name == name) return &p;
  }
  return nullptr;
}

const SymbolSignature* Signature::FindSymbol(std::string_view name) const {
  for (const SymbolSignature& s : symbols) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

namespace {

class UnionFind {
 public:
  int Add() {
    parent_.push_back(static_cast<int>(parent_.size()));
    is_bool_.push_back(false);
    has_symbol_.push_back(false);
    return parent_.back();
  }
  int Find(int n) {
    while (parent_[n] != n) {
      parent_[n] = parent_[parent_[n]];
      n = parent_[n];
    }
    return n;
  }
  // Returns false if the merged class would be both Bool and object.
  bool Union(int a, int b) {
    a = Find(a);
    b = Find(b);
    if (a == b) return true;
    if ((is_bool_[a] && has_symbol_[b]) || (is_bool_[b] && has_symbol_[a])) {
      return false;
    }
    if (b < a) std::swap(a, b);
    parent_[b] = a;
    is_bool_[a] = is_bool_[a] || is_bool_[b];
    has_symbol_[a] = has_symbol_[a] || has_symbol_[b];
    return true;
  }
  bool MarkBool(int n) {
    n = Find(n);
    if (has_symbol_[n]) return false;
    is_bool_[n] = true;
    return true;
  }
  void MarkSymbol(int n) { has_symbol_[Find(n)] = true; }
  bool IsBool(int n) { return is_bool_[Find(n)]; }

 private:
  std::vector<int> parent_;
  std::vector<bool> is_bool_;
  std::vector<bool> has_symbol_;
};

class Unifier {
 public:
  Signature Run(const Formula& f) {
    fol::CollectPredicates(f);  // arity conflicts surface first
    Walk(f);
    Signature sig;
    std::unordered_map<int, int> sort_of_root;
    auto resolve = [&](int node) {
      if (uf_.IsBool(node)) return Sort::Bool();
      int root = uf_.Find(node);
      auto [it, inserted] = sort_of_root.emplace(root, sig.sort_count);
      if (inserted) ++sig.sort_count;
      return Sort::Named(it->second);
    };
    // Sorts are numbered in the order nodes were first visited.
    std::vector<Sort> sorts(node_count_);
    for (int n = 0; n < node_count_; ++n) sorts[n] = resolve(n);
    for (const PendingPredicate& p : predicates_) {
      PredicateSignature ps{p.name, {}};
      for (int node : p.slots) ps.arg_sorts.push_back(sorts[node]);
      sig.predicates.push_back(std::move(ps));
    }
    for (const PendingSymbol& s : symbols_) {
      sig.symbols.push_back(
          SymbolSignature{s.name, sorts[s.node], s.bound, s.free});
    }
    return sig;
  }

 private:
  struct PendingPredicate {
    std::string name;
    std::vector<int> slots;
  };
  struct PendingSymbol {
    std::string name;
    int node;
    bool bound = false;
    bool free = false;
  };

  int NewNode() {
    ++node_count_;
    return uf_.Add();
  }

  PendingSymbol& Symbol(const std::string& name) {
    auto it = symbol_index_.find(name);
    if (it != symbol_index_.end()) return symbols_[it->second];
    int node = NewNode();
    uf_.MarkSymbol(node);
    symbol_index_.emplace(name, symbols_.size());
    symbols_.push_back(PendingSymbol{name, node});
    return symbols_.back();
  }

  PendingPredicate& Predicate(const std::string& name, size_t arity) {
    auto it = predicate_index_.find(name);
    if (it != predicate_index_.end()) return predicates_[it->second];
    PendingPredicate p{name, {}};
    for (size_t i = 0; i < arity; ++i) p.slots.push_back(NewNode());
    predicate_index_.emplace(name, predicates_.size());
    predicates_.push_back(std::move(p));
    return predicates_.back();
  }

  void Walk(const Formula& f) {
    switch (f.kind()) {
      case FormulaKind::kAtom:
        WalkAtom(f);
        return;
      case FormulaKind::kNot:
        Walk(f.operand());
        return;
      case FormulaKind::kAnd:
      case FormulaKind::kOr:
      case FormulaKind::kImplies:
        Walk(f.lhs());
        Walk(f.rhs());
        return;
      case FormulaKind::kForall:
      case FormulaKind::kExists: {
        Symbol(f.bound_variable()).bound = true;
        ++binder_depth_[f.bound_variable()];
        Walk(f.body());
        --binder_depth_[f.bound_variable()];
        return;
      }
    }
  }

  void WalkAtom(const Formula& f) {
    const std::string& pred = f.predicate();
    std::span<const Argument> args = f.args();
    // Slot nodes are created before any argument symbol so that a
    // predicate's slots are numbered ahead of the terms they hold.
    std::vector<int> slots = Predicate(pred, args.size()).slots;
    for (size_t i = 0; i < args.size(); ++i) {
      const int pos = static_cast<int>(i);
      if (const Term* t = std::get_if<Term>(&args[i])) {
        PendingSymbol& s = Symbol(t->name);
        if (binder_depth_[t->name] == 0) s.free = true;
        if (!uf_.Union(slots[i], s.node)) throw IncompatibleSorts(pred, pos);
      } else {
        if (!uf_.MarkBool(slots[i])) throw IncompatibleSorts(pred, pos);
        Walk(std::get<Formula>(args[i]));
      }
    }
  }

  UnionFind uf_;
  int node_count_ = 0;
  std::vector<PendingPredicate> predicates_;
  std::vector<PendingSymbol> symbols_;
  std::map<std::string, size_t> predicate_index_;
  std::map<std::string, size_t> symbol_index_;
  std::map<std::string, int> binder_depth_;
};

const std::set<std::string, std::less<>>& ReservedNames() {
  static const std::set<std::string, std::less<>> kNames = {
      "BINARY", "DECIMAL", "HEXADECIMAL", "NUMERAL", "STRING", "and",
      "as", "assert", "distinct", "echo", "exists", "exit", "false",
      "forall", "ite", "let", "match", "not", "or", "par", "pop", "push",
      "reset", "true", "xor"};
  return kNames;
}

}  // namespace

Signature UnifySorts(const Formula& f) { return Unifier().Run(f); }

std::string SmtSymbol(std::string_view name) {
  if (ReservedNames().count(name) > 0) return "_" + std::string(name);
  return std::string(name);
}

std::string SourceSymbol(std::string_view smt_name) {
  if (smt_name.size() > 1 && smt_name[0] == '_' &&
      ReservedNames().count(smt_name.substr(1)) > 0) {
    return std::string(smt_name.substr(1));
  }
  return std::string(smt_name);
}

namespace {

class PrefixBuilder {
 public:
  explicit PrefixBuilder(const Signature& sig) : sig_(sig) {}

  SExpr Build(const Formula& f) {
    switch (f.kind()) {
      case FormulaKind::kAtom:
        return Atom(f);
      case FormulaKind::kNot:
        return SExpr::List({SExpr::Atom("not"), Build(f.operand())});
      case FormulaKind::kAnd:
        return Binary("and", f);
      case FormulaKind::kOr:
        return Binary("or", f);
      case FormulaKind::kImplies:
        return Binary("=>", f);
      case FormulaKind::kForall:
        return Quantifier("forall", f);
      case FormulaKind::kExists:
        return Quantifier("exists", f);
    }
    throw Error("unreachable formula kind");
  }

 private:
  SExpr Binary(const char* op, const Formula& f) {
    SExpr lhs = Build(f.lhs());
    return SExpr::List({SExpr::Atom(op), std::move(lhs), Build(f.rhs())});
  }

  SExpr Quantifier(const char* q, const Formula& f) {
    const std::string& var = f.bound_variable();
    const SymbolSignature* s = sig_.FindSymbol(var);
    if (s == nullptr || s->sort.kind != Sort::Kind::kNamed) {
      throw UndeclaredSymbol("no sort for bound variable " + var);
    }
    SExpr binding = SExpr::List({SExpr::Atom(SmtSymbol(var)),
                                 SExpr::Atom(s->sort.ToString())});
    ++bound_[var];
    SExpr body = Build(f.body());
    --bound_[var];
    return SExpr::List({SExpr::Atom(q), SExpr::List({std::move(binding)}),
                        std::move(body)});
  }

  SExpr Atom(const Formula& f) {
    const PredicateSignature* p = sig_.FindPredicate(f.predicate());
    if (p == nullptr || p->arg_sorts.size() != f.args().size()) {
      throw UndeclaredSymbol("undeclared predicate " + f.predicate());
    }
    SExpr head = SExpr::Atom(SmtSymbol(f.predicate()));
    if (f.args().empty()) return head;
    std::vector<SExpr> items = {std::move(head)};
    for (const Argument& a : f.args()) {
      if (const Term* t = std::get_if<Term>(&a)) {
        const SymbolSignature* s = sig_.FindSymbol(t->name);
        bool ok = s != nullptr && (bound_[t->name] > 0 || s->free);
        if (!ok) throw UndeclaredSymbol("undeclared symbol " + t->name);
        items.push_back(SExpr::Atom(SmtSymbol(t->name)));
      } else {
        items.push_back(Build(std::get<Formula>(a)));
      }
    }
    return SExpr::List(std::move(items));
  }

  const Signature& sig_;
  std::map<std::string, int> bound_;
};

std::string JoinLines(const SmtScript& s, bool with_model) {
  std::string out = "(set-logic " + s.logic + ")\n";
  for (const std::string& l : s.sort_declarations) out += l + "\n";
  for (const std::string& l : s.function_declarations) out += l + "\n";
  out += s.assertion + "\n";
  for (const std::string& l : s.commands) {
    if (!with_model && l == "(get-model)") continue;
    out += l + "\n";
  }
  return out;
}

}  // namespace

SExpr ToPrefix(const Formula& f, const Signature& sig) {
  return PrefixBuilder(sig).Build(f);
}

std::string SmtScript::ToString() const { return JoinLines(*this, true); }

std::string SmtScript::ToStringWithoutModelRequest() const {
  return JoinLines(*this, false);
}

SmtScript EmitSmt(const Formula& f, const Signature& sig) {
  SExpr body = ToPrefix(f, sig);
  SmtScript script;
  for (int i = 0; i < sig.sort_count; ++i) {
    script.sort_declarations.push_back("(declare-sort S" + std::to_string(i) +
                                       " 0)");
  }
  for (const PredicateSignature& p : sig.predicates) {
    std::string args;
    for (size_t i = 0; i < p.arg_sorts.size(); ++i) {
      if (p.arg_sorts[i].kind == Sort::Kind::kUnresolved) {
        throw UndeclaredSymbol("unresolved sort in " + p.name);
      }
      if (i > 0) args += ' ';
      args += p.arg_sorts[i].ToString();
    }
    std::string name = SmtSymbol(p.name);
    script.function_declarations.push_back("(declare-fun " + name + " (" +
                                           args + ") Bool)");
    script.declared_symbols.push_back(name);
  }
  for (const SymbolSignature& s : sig.symbols) {
    if (!s.free) continue;
    std::string name = SmtSymbol(s.name);
    script.function_declarations.push_back("(declare-fun " + name + " () " +
                                           s.sort.ToString() + ")");
    script.declared_symbols.push_back(name);
  }
  script.assertion = "(assert (not " + body.ToString() + "))";
  script.commands = {"(check-sat)", "(get-model)"};
  return script;
}

Compilation Compile(const Formula& f) {
  Signature sig = UnifySorts(f);
  SmtScript script = EmitSmt(f, sig);
  std::vector<std::string> warnings;
  for (const PredicateSignature& p : sig.predicates) {
    for (size_t i = 0; i < p.arg_sorts.size(); ++i) {
      if (p.arg_sorts[i].kind == Sort::Kind::kBool) {
        warnings.push_back("predicate " + p.name + " takes a formula at argument " +
                           std::to_string(i) +
                           "; nested-formula arguments are compiled as Bool "
                           "slots");
      }
    }
  }
  return Compilation{f, std::move(sig), std::move(script), std::move(warnings)};
}

Compilation CompileText(std::string_view fol_text) {
  return Compile(fol::ParseFormula(fol_text));
}

}  // namespace nl2fol::smt
