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

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails. Runs offline against the recorded
// fixtures and the solver found at configure time.

#include <unistd.h>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "nl2fol/cli/cli.h"
#include "nl2fol/eval/dataset.h"
#include "nl2fol/eval/evaluate.h"
#include "nl2fol/eval/metrics.h"
#include "nl2fol/fol/parser.h"
#include "nl2fol/pipeline/pipeline.h"
#include "nl2fol/smt/compiler.h"
#include "nl2fol/solver/solver.h"
#include "tests/support/corpus.h"
#include "tests/support/formula_gen.h"

namespace nl2fol::acceptance {
namespace {

namespace fs = std::filesystem;
using pipeline::Classification;
using pipeline::PipelineTrace;
using nl2fol::testing::CorpusDataset;
using nl2fol::testing::CorpusDir;
using nl2fol::testing::ReplayGateway;
using nl2fol::testing::TestSolver;

// Time limits, in seconds.
constexpr double kWorkedExamplesLimit = 5.0;
constexpr double kFormEachLimit = 2.0;
constexpr double kOracleLimit = 60.0;

constexpr char kLf[] =
    "I met a tall man who loved to eat cheese, now I believe all tall people like cheese.";
constexpr char kV[] =
    "A boy is jumping on a skateboard in the middle of a red bridge. Thus the boy does a "
    "skateboarding trick.";

using Clock = std::chrono::steady_clock;

double Since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string ReadFile(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string Golden(const std::string& name) {
  return (fs::path(NL2FOL_TEST_DATA_DIR) / "golden" / name).string();
}

class TempDir {
 public:
  explicit TempDir(const std::string& tag)
      : path_(fs::temp_directory_path() /
              ("nl2fol-acceptance-" + tag + "-" + std::to_string(getpid()))) {
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

// Collects mismatches for one criterion.
class Check {
 public:
  void Expect(bool ok, const std::string& what) {
    if (!ok && failures_.size() < 8) failures_.push_back(what);
    if (!ok) ++count_;
  }
  bool ok() const { return count_ == 0; }
  std::string Summary() const {
    std::string s;
    for (const std::string& f : failures_) s += "\n      " + f;
    if (count_ > static_cast<int>(failures_.size())) {
      s += "\n      ... " + std::to_string(count_ - failures_.size()) + " more";
    }
    return s;
  }

 private:
  std::vector<std::string> failures_;
  int count_ = 0;
};

struct Result {
  bool pass = false;
  std::string detail;
};

std::set<std::string> AtomTexts(const std::vector<pipeline::PropertyAtom>& atoms) {
  std::set<std::string> out;
  for (const auto& a : atoms) out.insert(a.ToString());
  return out;
}

std::set<std::string> Predicates(const std::vector<pipeline::PropertyAtom>& atoms) {
  std::set<std::string> out;
  for (const auto& a : atoms) out.insert(a.predicate);
  return out;
}

std::set<std::string> FactTexts(const std::vector<pipeline::BackgroundFact>& facts) {
  std::set<std::string> out;
  for (const auto& f : facts) out.insert(f.antecedent.ToString() + " => " + f.consequent.ToString());
  return out;
}

bool HasEntity(const PipelineTrace& t, const std::string& text, const std::string& symbol) {
  for (const auto& e : t.entities) {
    if (e.text == text && e.symbol == symbol) return true;
  }
  return false;
}

// 1. Worked examples end-to-end in replay mode, matching the intermediate
// boxes field by field.
Result WorkedExamples() {
  const auto start = Clock::now();
  auto gateway = ReplayGateway();
  pipeline::Pipeline p(*gateway, TestSolver());
  Check c;

  PipelineTrace lf = p.Classify(kLf);
  c.Expect(lf.classification.label == Classification::Label::kFallacy,
           "LF label " + std::string(pipeline::LabelName(lf.classification.label)));
  if (lf.claim_implication) {
    c.Expect(lf.claim_implication->claims ==
                 std::vector<std::string>{"A tall man loved to eat cheese."},
             "LF claim");
    c.Expect(lf.claim_implication->implication == "All tall people like cheese.",
             "LF implication");
  } else {
    c.Expect(false, "LF claim/implication missing");
  }
  c.Expect(lf.entities.size() == 3 && HasEntity(lf, "man", "x") && HasEntity(lf, "cheese", "c") &&
               HasEntity(lf, "people", "y"),
           "LF entities");
  bool subset = false;
  for (const auto& r : lf.relations) {
    if (r.left == "x" && r.right == "y" && r.relation == pipeline::RelationKind::kSubsetLR) {
      subset = true;
    }
  }
  c.Expect(subset, "LF x subset of y");
  c.Expect(Predicates(lf.atoms) == std::set<std::string>{"Tall", "Love", "Like"},
           "LF properties");
  c.Expect(AtomTexts(lf.atoms).count("Tall(x)") && AtomTexts(lf.atoms).count("Love(x, c)"),
           "LF property entity relations");
  c.Expect(FactTexts(lf.facts) ==
               std::set<std::string>{"Like(y, c) => Love(x, c)", "Love(x, c) => Like(y, c)"},
           "LF background knowledge");
  c.Expect(lf.facts.size() == 2 &&
               lf.facts[0].realized == fol::ParseFormula("forall x (Like(x,c) -> Love(x,c))") &&
               lf.facts[1].realized == fol::ParseFormula("forall x (Love(x,c) -> Like(x,c))"),
           "LF realized background knowledge");
  c.Expect(lf.formula && *lf.formula == fol::ParseFormula(
                                            "((forall x (Like(x,c) -> Love(x,c))) & "
                                            "(forall x (Love(x,c) -> Like(x,c))) & "
                                            "(exists x (Tall(x) & Love(x,c)))) -> "
                                            "(forall y (Tall(y) -> Like(y,c)))"),
           "LF first-order logic: " + lf.fol_text);

  PipelineTrace v = p.Classify(kV);
  c.Expect(v.classification.label == Classification::Label::kValid,
           "V label " + std::string(pipeline::LabelName(v.classification.label)));
  if (v.claim_implication) {
    c.Expect(v.claim_implication->claims ==
                 std::vector<std::string>{
                     "A boy is jumping on a skateboard in the middle of a red bridge."},
             "V claim");
    c.Expect(v.claim_implication->implication == "The boy does a skateboarding trick.",
             "V implication");
  } else {
    c.Expect(false, "V claim/implication missing");
  }
  c.Expect(v.entities.size() == 4 && HasEntity(v, "boy", "b") &&
               HasEntity(v, "skateboard", "s") && HasEntity(v, "bridge", "bridge") &&
               HasEntity(v, "skateboardingTrick", "y"),
           "V entities");
  c.Expect(Predicates(v.atoms) == std::set<std::string>{"JumpsOn", "inMiddleOf", "Red", "Does"},
           "V properties");
  c.Expect(AtomTexts(v.atoms) == std::set<std::string>{"JumpsOn(b, s)", "Red(bridge)",
                                                       "inMiddleOf(b, bridge)", "Does(b, y)"},
           "V property entity relations");
  c.Expect(FactTexts(v.facts) == std::set<std::string>{"JumpsOn(b, s) => Does(b, y)"},
           "V background knowledge");
  c.Expect(v.facts.size() == 1 &&
               v.facts[0].realized == fol::ParseFormula("forall x (JumpsOn(x,s) -> Does(x,y))"),
           "V realized background knowledge");
  c.Expect(v.formula && *v.formula == fol::ParseFormula(
                                          "(forall x (JumpsOn(x,s) -> Does(x,y)) & Red(bridge) & "
                                          "inMiddleOf(b, bridge) & JumpsOn(b,s)) -> Does(b,y)"),
           "V first-order logic: " + v.fol_text);

  const double secs = Since(start);
  c.Expect(secs < kWorkedExamplesLimit, "runtime " + std::to_string(secs) + " s");
  char buf[64];
  std::snprintf(buf, sizeof buf, "LF=%s V=%s, %.2f s (limit %.0f s)",
                std::string(pipeline::LabelName(lf.classification.label)).c_str(),
                std::string(pipeline::LabelName(v.classification.label)).c_str(), secs,
                kWorkedExamplesLimit);
  return {c.ok(), buf + c.Summary()};
}

// 2. Four fallacy forms through `compile` then `solve`.
Result FallacyForms() {
  TempDir tmp("forms");
  Check c;
  double worst = 0.0;
  const char* forms[] = {"faulty_generalization", "false_causality", "ad_populum",
                         "false_dilemma"};
  auto env = [](const char* name) -> const char* {
    return std::string(name) == "NL2FOL_SOLVER" ? NL2FOL_TEST_SOLVER : nullptr;
  };
  for (const char* form : forms) {
    const auto start = Clock::now();
    const std::string smt = (tmp.path() / (std::string(form) + ".smt2")).string();
    std::ostringstream out, err;
    int rc = cli::RunCli({"compile", "--file", Golden(std::string("form_") + form + ".fol"),
                          "-o", smt},
                         out, err, env);
    c.Expect(rc == cli::kExitOk, std::string(form) + ": compile exit " + std::to_string(rc) +
                                     " " + err.str());
    std::ostringstream sout, serr;
    rc = cli::RunCli({"solve", smt}, sout, serr, env);
    const double secs = Since(start);
    worst = std::max(worst, secs);
    const bool sat = rc == cli::kExitOk && sout.str().rfind("sat\n", 0) == 0;
    c.Expect(sat, std::string(form) + ": expected sat, got exit " + std::to_string(rc) + " " +
                      sout.str().substr(0, 20));
    c.Expect(secs < kFormEachLimit, std::string(form) + ": " + std::to_string(secs) + " s");
  }
  char buf[96];
  std::snprintf(buf, sizeof buf, "4 forms, negation sat => Fallacy; slowest %.2f s (limit %.0f s)",
                worst, kFormEachLimit);
  return {c.ok(), buf + c.Summary()};
}

// 3. Solver verdicts against a truth-table oracle.
Result OracleEquivalence() {
  const auto start = Clock::now();
  std::mt19937_64 rng(20260101);
  solver::SolverConfig cfg = TestSolver();
  Check c;
  int agree = 0;
  const int n = 200;
  for (int i = 0; i < n; ++i) {
    fol::Formula f = testing::RandomPropositional(rng, 4, 4);
    solver::SolverOutcome out = solver::RunSolver(smt::Compile(f).script, cfg);
    const bool valid = testing::TruthTableValid(f);
    const bool ok = (out.verdict == solver::Verdict::kUnsat && valid) ||
                    (out.verdict == solver::Verdict::kSat && !valid);
    agree += ok;
    c.Expect(ok, fol::PrettyPrint(f) + ": " + std::string(solver::VerdictName(out.verdict)));
  }
  const double secs = Since(start);
  c.Expect(secs < kOracleLimit, "runtime " + std::to_string(secs) + " s");
  char buf[96];
  std::snprintf(buf, sizeof buf, "%d/%d agree, %.1f s (limit %.0f s)", agree, n, secs,
                kOracleLimit);
  return {c.ok(), buf + c.Summary()};
}

// 4. Well-formed formulas compile to scripts the solver accepts; malformed
// text yields positioned syntax errors and nothing else.
Result CompilerRobustness() {
  Check c;
  testing::GenOptions options;
  options.bool_slots = true;
  options.awkward_names = true;
  testing::FormulaGenerator gen(4242, options);
  solver::SolverConfig cfg = TestSolver(2.0);
  int accepted = 0, timeouts = 0;
  for (int i = 0; i < 1000; ++i) {
    fol::Formula f = gen.Next();
    try {
      smt::Compilation comp = smt::Compile(f);
      solver::SolverOutcome out = solver::RunSolver(comp.script, cfg);
      const bool ok = out.verdict != solver::Verdict::kSolverError;
      accepted += ok;
      timeouts += out.verdict == solver::Verdict::kTimeout;
      c.Expect(ok, fol::PrettyPrint(f) + ": " + out.error);
    } catch (const std::exception& e) {
      c.Expect(false, fol::PrettyPrint(f) + ": " + e.what());
    }
  }

  testing::FormulaGenerator seeds(99, testing::GenOptions{});
  testing::MalformedInputGenerator bad(7);
  int malformed = 0, positioned = 0, draws = 0;
  while (malformed < 1000 && draws < 100000) {
    ++draws;
    const std::string input = bad.Next(fol::PrettyPrint(seeds.Next()));
    try {
      fol::ParseFormula(input);
      continue;  // the mutation happened to stay well formed
    } catch (const fol::SyntaxError& e) {
      ++malformed;
      const bool ok = e.offset() <= input.size();
      positioned += ok;
      c.Expect(ok, "offset past end for " + input);
    } catch (const std::exception& e) {
      ++malformed;
      c.Expect(false, "non-syntax error for " + input + ": " + e.what());
    }
    // The full compile path must reject it the same way.
    try {
      smt::CompileText(input);
      c.Expect(false, "compiled malformed input " + input);
    } catch (const fol::SyntaxError&) {
    } catch (const std::exception& e) {
      c.Expect(false, "compile of " + input + " threw " + e.what());
    }
  }
  c.Expect(malformed == 1000, "only " + std::to_string(malformed) + " malformed inputs drawn");
  char buf[128];
  std::snprintf(buf, sizeof buf,
                "well-formed %d/1000 accepted (%d timeouts); malformed %d/%d positioned errors",
                accepted, timeouts, positioned, malformed);
  return {c.ok(), buf + c.Summary()};
}

// 5. Sort unification on the LF formula and the Bool-vs-object conflict.
Result SortUnification() {
  Check c;
  smt::Compilation comp = smt::CompileText(ReadFile(Golden("lf.fol")));
  const smt::Signature& sig = comp.signature;
  auto sorts = [&](const char* pred) {
    std::vector<std::string> out;
    if (const auto* p = sig.FindPredicate(pred)) {
      for (const smt::Sort& s : p->arg_sorts) out.push_back(s.ToString());
    }
    return out;
  };
  using V = std::vector<std::string>;
  c.Expect(sig.sort_count == 2, "sort count " + std::to_string(sig.sort_count));
  c.Expect(sig.predicates.size() == 3, "predicate count");
  c.Expect(sorts("Tall") == V{"S0"}, "Tall");
  c.Expect(sorts("Like") == V{"S0", "S1"}, "Like");
  c.Expect(sorts("Love") == V{"S0", "S1"}, "Love");
  const smt::SymbolSignature* cs = sig.FindSymbol("c");
  c.Expect(cs != nullptr && cs->sort.ToString() == "S1", "c");
  bool conflict = false;
  try {
    smt::CompileText("C(x) & A(x) & A(C(y))");
  } catch (const smt::IncompatibleSorts&) {
    conflict = true;
  } catch (const std::exception&) {
  }
  c.Expect(conflict, "C(x) & A(x) & A(C(y)) did not raise IncompatibleSorts");
  return {c.ok(),
          "Tall:(S0) Like/Love:(S0,S1) c:S1; Bool-vs-object raises IncompatibleSorts" +
              c.Summary()};
}

// 6. Adding one more background fact to a Valid formula never makes its
// negation satisfiable.
Result Monotonicity() {
  Check c;
  auto gateway = ReplayGateway();
  pipeline::Pipeline p(*gateway, TestSolver());
  std::vector<eval::LabeledExample> data = eval::LoadDataset(CorpusDataset());
  int valid_examples = 0, candidates = 0, violations = 0, undecided = 0;
  for (const eval::LabeledExample& ex : data) {
    PipelineTrace t = p.Classify(ex.text);
    if (t.classification.label != Classification::Label::kValid) continue;
    ++valid_examples;
    std::vector<fol::Formula> claims;
    std::optional<fol::Formula> implication;
    for (const pipeline::SentenceForm& s : t.sentences) {
      if (!s.formula) continue;
      if (s.source == pipeline::AtomSource::kClaim) {
        claims.push_back(*s.formula);
      } else {
        implication = *s.formula;
      }
    }
    if (!implication) {
      c.Expect(false, ex.id + ": no implication formula");
      continue;
    }
    c.Expect(pipeline::AssembleFormula(t.facts, claims, *implication) == *t.formula,
             ex.id + ": reassembly differs from the trace formula");
    for (size_t i = 0; i < t.atoms.size(); ++i) {
      for (size_t j = 0; j < t.atoms.size(); ++j) {
        if (i == j) continue;
        pipeline::BackgroundFact extra;
        extra.antecedent = t.atoms[i];
        extra.consequent = t.atoms[j];
        extra.realized = pipeline::RealizeFact(t.atoms[i], t.atoms[j], t.relations);
        std::vector<pipeline::BackgroundFact> facts = t.facts;
        facts.push_back(extra);
        fol::Formula f = pipeline::AssembleFormula(facts, claims, *implication);
        ++candidates;
        solver::SolverOutcome out = solver::RunSolver(smt::Compile(f).script, p.solver_config());
        if (out.verdict == solver::Verdict::kSat) {
          ++violations;
          c.Expect(false, ex.id + " + " + fol::PrettyPrint(extra.realized) + " became sat");
        } else if (out.verdict != solver::Verdict::kUnsat) {
          ++undecided;
          c.Expect(false, ex.id + " + " + fol::PrettyPrint(extra.realized) + ": " +
                              std::string(solver::VerdictName(out.verdict)));
        }
      }
    }
  }
  c.Expect(valid_examples > 0, "no Valid verdicts in the corpus");
  char buf[128];
  std::snprintf(buf, sizeof buf,
                "%d Valid examples, %d single-fact extensions, %d violations, %d undecided",
                valid_examples, candidates, violations, undecided);
  return {c.ok(), buf + c.Summary()};
}

// 7. Metrics on the 8/2/2/8 fixture and the null-division cases.
Result MetricsCorrectness() {
  using eval::GoldLabel;
  using eval::Predicted;
  Check c;
  std::vector<eval::ExampleRecord> records;
  auto add = [&](GoldLabel g, Predicted p, int n) {
    for (int i = 0; i < n; ++i) {
      eval::ExampleRecord r;
      r.id = std::to_string(records.size());
      r.gold = g;
      r.predicted = p;
      records.push_back(r);
    }
  };
  add(GoldLabel::kFallacy, Predicted::kFallacy, 8);
  add(GoldLabel::kValid, Predicted::kFallacy, 2);
  add(GoldLabel::kFallacy, Predicted::kValid, 2);
  add(GoldLabel::kValid, Predicted::kValid, 8);
  eval::MetricsReport r = eval::MakeReport("nl2fol", records, eval::UnknownAs::kFallacy);
  const eval::Metrics& m = r.metrics;
  c.Expect(r.confusion.tp == 8 && r.confusion.fp == 2 && r.confusion.fn == 2 &&
               r.confusion.tn == 8,
           "confusion");
  // Exact equality: no tolerance.
  c.Expect(m.accuracy && *m.accuracy == 0.8, "accuracy");
  c.Expect(m.precision && *m.precision == 0.8, "precision");
  c.Expect(m.recall && *m.recall == 0.8, "recall");
  c.Expect(m.f1 && *m.f1 == 0.8, "f1");

  eval::Metrics none = eval::ComputeMetrics(eval::Confusion{});
  c.Expect(!none.accuracy && !none.precision && !none.recall && !none.f1, "empty confusion");
  eval::Metrics no_pos_pred = eval::ComputeMetrics(eval::Confusion{0, 0, 4, 3, 0, 0});
  c.Expect(!no_pos_pred.precision && no_pos_pred.recall && *no_pos_pred.recall == 0.0 &&
               !no_pos_pred.f1,
           "precision null without positive predictions");
  eval::Metrics no_gold_pos = eval::ComputeMetrics(eval::Confusion{0, 2, 5, 0, 0, 0});
  c.Expect(!no_gold_pos.recall && !no_gold_pos.f1, "recall null without gold positives");
  const nlohmann::json j = eval::ToJson(eval::MakeReport("x", {}, eval::UnknownAs::kDrop));
  c.Expect(j["metrics"]["accuracy"].is_null() && j["metrics"]["f1"].is_null(),
           "null serialized as null");
  return {c.ok(), "8/2/2/8 -> 0.80 exactly; zero denominators -> null" + c.Summary()};
}

// 8. The replay evaluation reproduces the committed golden report.
Result GoldenReport() {
  Check c;
  const std::string golden = ReadFile(CorpusDir() + "/golden_report.json");
  eval::MetricsReport first;
  for (int parallelism : {1, 4}) {
    TempDir tmp("golden" + std::to_string(parallelism));
    auto gateway = ReplayGateway();
    pipeline::Pipeline p(*gateway, TestSolver());
    eval::EvalOptions opts;
    opts.parallelism = parallelism;
    opts.trace_dir = (tmp.path() / "traces").string();
    opts.dataset_name = "corpus.jsonl";
    eval::MetricsReport r = eval::Evaluate(eval::LoadDataset(CorpusDataset()), p, opts);
    c.Expect(eval::ToJson(r).dump(2) + "\n" == golden,
             "parallelism " + std::to_string(parallelism) + " differs from golden_report.json");
    first = r;
  }
  const eval::Confusion& k = first.confusion;
  char buf[128];
  std::snprintf(buf, sizeof buf, "bit-identical; TP/FP/TN/FN %d/%d/%d/%d, F1 %.3f", k.tp, k.fp,
                k.tn, k.fn, first.metrics.f1 ? *first.metrics.f1 : -1.0);
  return {c.ok(), buf + c.Summary()};
}

struct Criterion {
  const char* name;
  std::function<Result()> run;
};

int Main() {
  if (std::string(NL2FOL_TEST_SOLVER).empty()) {
    std::printf("FAIL no SMT solver was found at configure time\n");
    return 1;
  }
  const std::vector<Criterion> criteria = {
      {"worked_examples", WorkedExamples},
      {"fallacy_forms", FallacyForms},
      {"oracle_equivalence", OracleEquivalence},
      {"compiler_robustness", CompilerRobustness},
      {"sort_unification", SortUnification},
      {"monotonicity", Monotonicity},
      {"metrics_correctness", MetricsCorrectness},
      {"replay_golden_report", GoldenReport},
  };
  int failed = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    Result r;
    try {
      r = criteria[i].run();
    } catch (const std::exception& e) {
      r = {false, std::string("exception: ") + e.what()};
    }
    failed += !r.pass;
    std::printf("%s [%zu] %s: %s\n", r.pass ? "PASS" : "FAIL", i + 1, criteria[i].name,
                r.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}

}  // namespace
}  // namespace nl2fol::acceptance

int main() { return nl2fol::acceptance::Main(); }
