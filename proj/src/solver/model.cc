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

#include <algorithm>
#include <cctype>
#include <map>
#include <regex>
#include <set>
#include <sstream>

#include "nl2fol/solver/solver.h"
#include "nl2fol/util/sexpr.h"

namespace nl2fol::solver {

namespace {

constexpr size_t kMaxTableRows = 4096;
constexpr int kMaxEvalDepth = 64;

struct Unsupported {
  std::string what;
};

struct RawDefinition {
  std::string name;  // SMT-level
  std::vector<std::pair<std::string, std::string>> params;  // name, sort
  std::string result_sort;
  SExpr body;
  std::string raw;
};

// Orders "S0!val!10" after "S0!val!2".
bool NaturalLess(const std::string& a, const std::string& b) {
  auto split = [](const std::string& s) {
    size_t i = s.size();
    while (i > 0 && std::isdigit(static_cast<unsigned char>(s[i - 1]))) --i;
    std::string digits = s.substr(i);
    long long n = digits.empty() || digits.size() > 18 ? -1 : std::stoll(digits);
    return std::make_pair(s.substr(0, i), n);
  };
  auto [pa, na] = split(a);
  auto [pb, nb] = split(b);
  if (pa != pb) return pa < pb;
  if (na != nb) return na < nb;
  return a < b;
}

void AddElement(std::map<std::string, std::vector<std::string>>& domains,
                const std::string& sort, const std::string& element) {
  std::vector<std::string>& d = domains[sort];
  if (std::find(d.begin(), d.end(), element) == d.end()) d.push_back(element);
}

// `(as X S)` names element X of sort S.
std::optional<std::string> AsElement(const SExpr& e) {
  if (e.HasHead("as") && e.items.size() == 3 && !e.items[1].is_list) {
    return e.items[1].atom;
  }
  return std::nullopt;
}

class Evaluator {
 public:
  Evaluator(const std::map<std::string, RawDefinition>& defs,
            const std::set<std::string>& declared)
      : defs_(defs), declared_(declared) {}

  std::string Eval(const SExpr& e, const std::map<std::string, std::string>& env,
                   int depth) {
    if (depth > kMaxEvalDepth) throw Unsupported{"evaluation too deep"};
    if (!e.is_list) return EvalAtom(e.atom, env, depth);
    if (auto el = AsElement(e)) return *el;
    if (e.items.empty() || e.items[0].is_list) {
      throw Unsupported{"unexpected list " + e.ToString()};
    }
    const std::string& op = e.items[0].atom;
    std::vector<SExpr> args(e.items.begin() + 1, e.items.end());
    if (op == "let") return EvalLet(e, env, depth);
    if (op == "ite") {
      if (args.size() != 3) throw Unsupported{"bad ite"};
      return Bool(args[0], env, depth) ? Eval(args[1], env, depth + 1)
                                       : Eval(args[2], env, depth + 1);
    }
    if (op == "not") {
      if (args.size() != 1) throw Unsupported{"bad not"};
      return Str(!Bool(args[0], env, depth));
    }
    if (op == "and") {
      for (const SExpr& a : args) {
        if (!Bool(a, env, depth)) return "false";
      }
      return "true";
    }
    if (op == "or") {
      for (const SExpr& a : args) {
        if (Bool(a, env, depth)) return "true";
      }
      return "false";
    }
    if (op == "xor") {
      bool v = false;
      for (const SExpr& a : args) v = v != Bool(a, env, depth);
      return Str(v);
    }
    if (op == "=>") {
      if (args.empty()) throw Unsupported{"bad =>"};
      bool v = Bool(args.back(), env, depth);
      for (size_t i = args.size() - 1; i-- > 0;) {
        v = !Bool(args[i], env, depth) || v;
      }
      return Str(v);
    }
    if (op == "=" || op == "distinct") {
      std::vector<std::string> vals;
      for (const SExpr& a : args) vals.push_back(Eval(a, env, depth + 1));
      if (op == "=") {
        for (size_t i = 1; i < vals.size(); ++i) {
          if (vals[i] != vals[0]) return "false";
        }
        return "true";
      }
      std::set<std::string> uniq(vals.begin(), vals.end());
      return Str(uniq.size() == vals.size());
    }
    auto it = defs_.find(op);
    if (it == defs_.end()) throw Unsupported{"unknown function " + op};
    const RawDefinition& def = it->second;
    if (def.params.size() != args.size()) {
      throw Unsupported{"arity mismatch calling " + op};
    }
    std::map<std::string, std::string> inner;
    for (size_t i = 0; i < args.size(); ++i) {
      inner[def.params[i].first] = Eval(args[i], env, depth + 1);
    }
    return Eval(def.body, inner, depth + 1);
  }

 private:
  static std::string Str(bool b) { return b ? "true" : "false"; }

  bool Bool(const SExpr& e, const std::map<std::string, std::string>& env,
            int depth) {
    std::string v = Eval(e, env, depth + 1);
    if (v == "true") return true;
    if (v == "false") return false;
    throw Unsupported{"expected Bool, got " + v};
  }

  std::string EvalAtom(const std::string& a,
                       const std::map<std::string, std::string>& env,
                       int depth) {
    if (a == "true" || a == "false") return a;
    auto e = env.find(a);
    if (e != env.end()) return e->second;
    auto d = defs_.find(a);
    if (d != defs_.end()) {
      if (!d->second.params.empty()) throw Unsupported{"unapplied " + a};
      return Eval(d->second.body, {}, depth + 1);
    }
    if (declared_.count(a) > 0) throw Unsupported{"no definition for " + a};
    return a;  // a domain element
  }

  std::string EvalLet(const SExpr& e,
                      const std::map<std::string, std::string>& env, int depth) {
    if (e.items.size() != 3 || !e.items[1].is_list) throw Unsupported{"bad let"};
    std::map<std::string, std::string> inner = env;
    for (const SExpr& b : e.items[1].items) {
      if (!b.is_list || b.items.size() != 2 || b.items[0].is_list) {
        throw Unsupported{"bad let binding"};
      }
      inner[b.items[0].atom] = Eval(b.items[1], env, depth + 1);
    }
    return Eval(e.items[2], inner, depth + 1);
  }

  const std::map<std::string, RawDefinition>& defs_;
  const std::set<std::string>& declared_;
};

std::optional<RawDefinition> ReadDefinition(const SExpr& e) {
  if (!e.HasHead("define-fun") || e.items.size() != 5) return std::nullopt;
  const SExpr& name = e.items[1];
  const SExpr& params = e.items[2];
  const SExpr& result = e.items[3];
  if (name.is_list || !params.is_list || result.is_list) return std::nullopt;
  RawDefinition def;
  def.name = name.atom;
  def.result_sort = result.atom;
  for (const SExpr& p : params.items) {
    if (!p.is_list || p.items.size() != 2 || p.items[0].is_list ||
        p.items[1].is_list) {
      return std::nullopt;
    }
    def.params.emplace_back(p.items[0].atom, p.items[1].atom);
  }
  def.body = e.items[4];
  def.raw = e.ToString();
  return def;
}

// Element names that appear in a definition body next to a sorted value.
void HarvestElements(const SExpr& e,
                     const std::map<std::string, std::string>& param_sorts,
                     const std::set<std::string>& defined,
                     std::map<std::string, std::vector<std::string>>& domains) {
  if (!e.is_list) return;
  if (e.HasHead("as") && e.items.size() == 3 && !e.items[1].is_list &&
      !e.items[2].is_list) {
    AddElement(domains, e.items[2].atom, e.items[1].atom);
    return;
  }
  if (e.HasHead("=") && e.items.size() == 3) {
    for (int side = 1; side <= 2; ++side) {
      const SExpr& a = e.items[side];
      const SExpr& b = e.items[3 - side];
      if (a.is_list || b.is_list) continue;
      auto ps = param_sorts.find(a.atom);
      if (ps == param_sorts.end() || ps->second == "Bool") continue;
      if (param_sorts.count(b.atom) > 0 || defined.count(b.atom) > 0) continue;
      AddElement(domains, ps->second, b.atom);
    }
  }
  for (const SExpr& c : e.items) HarvestElements(c, param_sorts, defined, domains);
}

// cvc-style domain comments: "; cardinality of S0 is 2" and "; rep: @S0_0".
void ScanRepComments(std::string_view raw,
                     std::map<std::string, std::vector<std::string>>& domains) {
  static const std::regex kCardinality(R"(cardinality of\s+\|?([^\s|]+)\|?\s+is)");
  static const std::regex kDeclareSort(R"(\(declare-sort\s+\|?([^\s|)]+))");
  static const std::regex kRep(R"(;\s*rep:\s*(.+?)\s*$)");
  static const std::regex kAs(R"(\(as\s+\|?([^\s|]+)\|?\s+\|?([^\s|)]+)\|?\))");
  std::string current;
  std::istringstream in{std::string(raw)};
  std::string line;
  std::smatch m;
  while (std::getline(in, line)) {
    if (std::regex_search(line, m, kRep)) {
      std::string rep = m[1];
      std::smatch am;
      if (std::regex_search(rep, am, kAs)) {
        AddElement(domains, am[2], am[1]);
      } else if (!current.empty()) {
        if (rep.size() > 1 && rep.front() == '|' && rep.back() == '|') {
          rep = rep.substr(1, rep.size() - 2);
        }
        AddElement(domains, current, rep);
      }
    } else if (std::regex_search(line, m, kCardinality) ||
               std::regex_search(line, m, kDeclareSort)) {
      current = m[1];
    }
  }
}

std::vector<std::vector<std::string>> Tuples(
    const std::vector<std::vector<std::string>>& domains) {
  std::vector<std::vector<std::string>> out = {{}};
  for (const std::vector<std::string>& d : domains) {
    std::vector<std::vector<std::string>> next;
    for (const std::vector<std::string>& prefix : out) {
      for (const std::string& v : d) {
        next.push_back(prefix);
        next.back().push_back(v);
      }
    }
    out = std::move(next);
  }
  return out;
}

}  // namespace

const Model::Definition* Model::Find(std::string_view symbol) const {
  for (const Definition& d : definitions) {
    if (d.symbol == symbol) return &d;
  }
  return nullptr;
}

std::optional<std::string> Model::Value(
    std::string_view symbol, const std::vector<std::string>& args) const {
  const Definition* d = Find(symbol);
  if (d == nullptr) return std::nullopt;
  for (const Row& r : d->table) {
    if (r.args == args) return r.value;
  }
  return std::nullopt;
}

Model ParseModel(std::string_view raw, const smt::SmtScript& script) {
  std::vector<SExpr> top;
  try {
    top = ParseSExprs(raw);
  } catch (const SExprError& e) {
    throw ModelParseError(std::string("malformed model: ") + e.what());
  }
  std::vector<SExpr> entries;
  for (SExpr& e : top) {
    if (!e.is_list) {
      if (e.atom == "sat" || e.atom == "unsat" || e.atom == "unknown") continue;
      entries.push_back(std::move(e));
      continue;
    }
    size_t skip = e.HasHead("model") ? 1 : 0;
    bool block = skip == 1 || (!e.items.empty() && e.items[0].is_list);
    if (block || e.items.empty()) {
      entries.insert(entries.end(), e.items.begin() + skip, e.items.end());
    } else {
      entries.push_back(std::move(e));
    }
  }

  Model model;
  ScanRepComments(raw, model.domains);
  const std::set<std::string> declared(script.declared_symbols.begin(),
                                       script.declared_symbols.end());
  std::map<std::string, RawDefinition> defs;
  std::vector<std::string> order;
  for (const SExpr& e : entries) {
    if (auto def = ReadDefinition(e)) {
      if (defs.count(def->name) == 0) order.push_back(def->name);
      defs[def->name] = std::move(*def);
    } else if (e.HasHead("declare-fun") && e.items.size() == 4 &&
               e.items[2].is_list && e.items[2].items.empty() &&
               !e.items[1].is_list && !e.items[3].is_list &&
               declared.count(e.items[1].atom) == 0) {
      AddElement(model.domains, e.items[3].atom, e.items[1].atom);
    } else if (e.HasHead("declare-sort") || e.HasHead("forall")) {
      // Sort declarations and z3's cardinality constraints carry nothing new.
    } else {
      model.unparsed.push_back(e.ToString());
      model.warnings.push_back("unrecognized model fragment: " + e.ToString());
    }
  }

  std::set<std::string> defined;
  for (const auto& [name, def] : defs) defined.insert(name);
  for (const auto& [name, def] : defs) {
    std::map<std::string, std::string> param_sorts(def.params.begin(),
                                                   def.params.end());
    HarvestElements(def.body, param_sorts, defined, model.domains);
    if (def.params.empty() && def.result_sort != "Bool" && !def.body.is_list &&
        def.body.atom != "true" && def.body.atom != "false" &&
        defined.count(def.body.atom) == 0) {
      AddElement(model.domains, def.result_sort, def.body.atom);
    }
  }
  for (auto& [sort, elements] : model.domains) {
    std::sort(elements.begin(), elements.end(), NaturalLess);
  }

  Evaluator eval(defs, declared);
  for (const std::string& name : order) {
    if (declared.count(name) == 0) continue;  // solver-internal helper
    const RawDefinition& def = defs[name];
    Model::Definition out;
    out.symbol = smt::SourceSymbol(name);
    out.result_sort = def.result_sort;
    out.raw = def.raw;
    std::vector<std::vector<std::string>> arg_domains;
    bool enumerable = true;
    size_t rows = 1;
    for (const auto& [pname, psort] : def.params) {
      out.arg_sorts.push_back(psort);
      if (psort == "Bool") {
        arg_domains.push_back({"false", "true"});
      } else {
        auto it = model.domains.find(psort);
        if (it == model.domains.end() || it->second.empty()) {
          enumerable = false;
          model.warnings.push_back("no domain elements known for sort " +
                                   psort + " used by " + out.symbol);
          break;
        }
        arg_domains.push_back(it->second);
      }
      rows *= arg_domains.back().size();
      if (rows > kMaxTableRows) {
        enumerable = false;
        model.warnings.push_back("table for " + out.symbol + " too large");
        break;
      }
    }
    if (enumerable) {
      try {
        for (std::vector<std::string>& tuple : Tuples(arg_domains)) {
          std::map<std::string, std::string> env;
          for (size_t i = 0; i < tuple.size(); ++i) {
            env[def.params[i].first] = tuple[i];
          }
          std::string value = eval.Eval(def.body, env, 0);
          out.table.push_back(Model::Row{std::move(tuple), std::move(value)});
        }
        out.evaluated = true;
      } catch (const Unsupported& u) {
        out.table.clear();
        model.unparsed.push_back(def.raw);
        model.warnings.push_back("could not evaluate " + out.symbol + ": " +
                                 u.what);
      }
    }
    model.definitions.push_back(std::move(out));
  }
  return model;
}

}  // namespace nl2fol::solver
