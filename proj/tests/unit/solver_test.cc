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

#include "nl2fol/solver/solver.h"

#include <dirent.h>
#include <sys/stat.h>
#include <unistd.h>

#include <gtest/gtest.h>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "nl2fol/fol/parser.h"
#include "tests/support/formula_gen.h"
#include "tests/support/model_check.h"

namespace nl2fol::solver {
namespace {

namespace fs = std::filesystem;

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string Golden(const std::string& name) {
  return ReadFile(std::string(NL2FOL_TEST_DATA_DIR) + "/golden/" + name);
}

SolverConfig RealSolver(double timeout = 10.0) {
  SolverConfig cfg;
  cfg.executable = NL2FOL_TEST_SOLVER;
  cfg.timeout_seconds = timeout;
  return cfg;
}

#define REQUIRE_SOLVER()                                      \
  if (std::string(NL2FOL_TEST_SOLVER).empty()) {              \
    GTEST_SKIP() << "no SMT solver available at build time"; \
  }

// Shell scripts standing in for a solver.
class FakeSolvers : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("nl2fol-fake-" + std::to_string(getpid()) + "-" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  SolverConfig Fake(const std::string& name, const std::string& body,
                    double timeout = 5.0) {
    fs::path p = dir_ / name;
    std::ofstream(p) << "#!/bin/sh\n" << body << "\n";
    chmod(p.c_str(), 0755);
    SolverConfig cfg;
    cfg.executable = p.string();
    cfg.timeout_seconds = timeout;
    return cfg;
  }

  fs::path dir_;
};

smt::SmtScript Tautology() { return smt::CompileText("P -> P").script; }

// Processes whose command line contains `marker`.
int CountProcessesWith(const std::string& marker) {
  int count = 0;
  for (const auto& entry : fs::directory_iterator("/proc")) {
    const std::string name = entry.path().filename();
    if (name.find_first_not_of("0123456789") != std::string::npos) continue;
    std::string cmdline = ReadFile(entry.path() / "cmdline");
    for (char& c : cmdline) {
      if (c == '\0') c = ' ';
    }
    if (cmdline.find(marker) != std::string::npos) ++count;
  }
  return count;
}

// Like CountProcessesWith, but gives a killed process up to `seconds` to
// disappear; signal delivery is asynchronous.
int CountSurvivorsWith(const std::string& marker, double seconds = 2.0) {
  const auto deadline = std::chrono::steady_clock::now() +
                        std::chrono::duration<double>(seconds);
  int n = CountProcessesWith(marker);
  while (n > 0 && std::chrono::steady_clock::now() < deadline) {
    usleep(20000);
    n = CountProcessesWith(marker);
  }
  return n;
}

// Direct children of this test process.
int CountChildren() {
  int count = 0;
  const std::string self = std::to_string(getpid());
  for (const auto& entry : fs::directory_iterator("/proc")) {
    const std::string name = entry.path().filename();
    if (name.find_first_not_of("0123456789") != std::string::npos) continue;
    std::string stat = ReadFile(entry.path() / "stat");
    size_t close = stat.rfind(')');
    if (close == std::string::npos) continue;
    std::istringstream rest(stat.substr(close + 2));
    std::string state, ppid;
    rest >> state >> ppid;
    if (ppid == self) ++count;
  }
  return count;
}

TEST(VerdictTest, NamesRoundTrip) {
  for (Verdict v : {Verdict::kSat, Verdict::kUnsat, Verdict::kUnknown,
                    Verdict::kTimeout, Verdict::kSolverError}) {
    EXPECT_EQ(ParseVerdict(VerdictName(v)), v);
  }
  EXPECT_EQ(VerdictName(Verdict::kSolverError), "SOLVER_ERROR");
  EXPECT_THROW(ParseVerdict("maybe"), Error);
}

TEST(SolverCommandTest, FamilyFlags) {
  SolverConfig cfg;
  cfg.executable = "/opt/bin/cvc4";
  cfg.extra_args = {"--seed=1"};
  std::vector<std::string> cvc = {"/opt/bin/cvc4", "--lang=smt2",
                                  "--produce-models", "--finite-model-find",
                                  "--seed=1", "f.smt2"};
  EXPECT_EQ(SolverCommand(cfg, "f.smt2"), cvc);
  cfg.executable = "z3";
  cfg.extra_args.clear();
  std::vector<std::string> z3 = {"z3", "-smt2", "smt.mbqi=true", "f.smt2"};
  EXPECT_EQ(SolverCommand(cfg, "f.smt2"), z3);
  cfg.finite_model_find = false;
  EXPECT_EQ(SolverCommand(cfg, "f.smt2").size(), 3u);
  cfg.executable = "yices-smt2";
  EXPECT_EQ(SolverCommand(cfg, "f.smt2"),
            (std::vector<std::string>{"yices-smt2", "f.smt2"}));
}

TEST(SolverConfigTest, Validate) {
  SolverConfig cfg;
  cfg.executable = "/nonexistent/solver";
  EXPECT_THROW(cfg.Validate(), ConfigError);
  cfg.executable = "sh";
  cfg.timeout_seconds = 0;
  EXPECT_THROW(cfg.Validate(), ConfigError);
  cfg.timeout_seconds = 1;
  EXPECT_NO_THROW(cfg.Validate());
}

TEST(SolverConfigTest, EnvironmentOverride) {
  setenv("NL2FOL_SOLVER", "/some/where/cvc5", 1);
  EXPECT_EQ(SolverConfig::FromEnvironment().executable, "/some/where/cvc5");
  unsetenv("NL2FOL_SOLVER");
  EXPECT_DOUBLE_EQ(SolverConfig::FromEnvironment().timeout_seconds, 10.0);
}

// Reference z3 output for the LF script, captured once from the pinned
// solver.
TEST(ParseModelTest, Z3ModelForLfExample) {
  smt::Compilation c = smt::CompileText(Golden("lf.fol"));
  Model m = ParseModel(Golden("lf.z3model"), c.script);
  EXPECT_TRUE(m.warnings.empty());
  ASSERT_EQ(m.domains.size(), 2u);
  EXPECT_EQ(m.domains["S0"],
            (std::vector<std::string>{"S0!val!0", "S0!val!1"}));
  EXPECT_EQ(m.domains["S1"], (std::vector<std::string>{"S1!val!0"}));
  EXPECT_EQ(m.Value("c", {}), "S1!val!0");
  EXPECT_EQ(m.Value("Tall", {"S0!val!0"}), "true");
  EXPECT_EQ(m.Value("Tall", {"S0!val!1"}), "true");
  EXPECT_EQ(m.Value("Like", {"S0!val!0", "S1!val!0"}), "true");
  EXPECT_EQ(m.Value("Like", {"S0!val!1", "S1!val!0"}), "false");
  ASSERT_NE(m.Find("Love"), nullptr);
  EXPECT_EQ(m.Find("Love")->table.size(), 2u);
  EXPECT_EQ(m.Find("Love")->arg_sorts,
            (std::vector<std::string>{"S0", "S1"}));
  // The model is a counterexample: the formula is false in it.
  testing::ModelChecker check(c.signature, m);
  EXPECT_EQ(check.Eval(c.formula), false);
}

TEST(ParseModelTest, CvcStyleModel) {
  smt::Compilation c = smt::CompileText("forall x. Tall(x) -> Like(x, k)");
  const std::string raw =
      "(\n"
      "; cardinality of S0 is 2\n"
      "(declare-sort S0 0)\n"
      "; rep: (as @S0_0 S0)\n"
      "; rep: (as @S0_1 S0)\n"
      "; cardinality of S1 is 1\n"
      "; rep: @uc_S1_0\n"
      "(define-fun Tall ((_arg_1 S0)) Bool (= _arg_1 (as @S0_1 S0)))\n"
      "(define-fun Like ((_arg_1 S0) (_arg_2 S1)) Bool false)\n"
      "(define-fun k () S1 @uc_S1_0)\n"
      ")\n";
  Model m = ParseModel(raw, c.script);
  EXPECT_EQ(m.domains["S0"], (std::vector<std::string>{"@S0_0", "@S0_1"}));
  EXPECT_EQ(m.domains["S1"], (std::vector<std::string>{"@uc_S1_0"}));
  EXPECT_EQ(m.Value("Tall", {"@S0_0"}), "false");
  EXPECT_EQ(m.Value("Tall", {"@S0_1"}), "true");
  EXPECT_EQ(m.Value("Like", {"@S0_1", "@uc_S1_0"}), "false");
  EXPECT_EQ(m.Value("k", {}), "@uc_S1_0");
}

TEST(ParseModelTest, HelperFunctionsAndLet) {
  smt::Compilation c = smt::CompileText("P(a) -> P(b)");
  const std::string raw =
      "sat\n(\n"
      "  (define-fun a () S0 S0!val!0)\n"
      "  (define-fun b () S0 S0!val!1)\n"
      "  (define-fun P!3 ((x!0 S0)) Bool (let ((a!1 (= x!0 S0!val!0))) a!1))\n"
      "  (define-fun P ((x!0 S0)) Bool (P!3 x!0))\n"
      ")\n";
  Model m = ParseModel(raw, c.script);
  EXPECT_EQ(m.domains["S0"], (std::vector<std::string>{"S0!val!0", "S0!val!1"}));
  EXPECT_EQ(m.Value("P", {"S0!val!0"}), "true");
  EXPECT_EQ(m.Value("P", {"S0!val!1"}), "false");
  EXPECT_EQ(m.Find("P!3"), nullptr);  // not declared by the script
}

TEST(ParseModelTest, MangledNamesAreRestored) {
  smt::Compilation c = smt::CompileText("true -> let");
  Model m = ParseModel(
      "((define-fun _true () Bool true) (define-fun _let () Bool false))",
      c.script);
  EXPECT_EQ(m.Value("true", {}), "true");
  EXPECT_EQ(m.Value("let", {}), "false");
}

TEST(ParseModelTest, EmptyModel) {
  Model m = ParseModel("()", Tautology());
  EXPECT_TRUE(m.definitions.empty());
  EXPECT_TRUE(m.domains.empty());
  EXPECT_TRUE(m.warnings.empty());
  EXPECT_TRUE(ParseModel("", Tautology()).definitions.empty());
}

TEST(ParseModelTest, MalformedParentheses) {
  EXPECT_THROW(ParseModel("((define-fun P () Bool true)", Tautology()),
               ModelParseError);
  EXPECT_THROW(ParseModel("(define-fun P () Bool true))", Tautology()),
               ModelParseError);
}

TEST(ParseModelTest, UnevaluableFragmentsKeptVerbatim) {
  smt::Compilation c = smt::CompileText("P(a)");
  Model m = ParseModel(
      "((define-fun a () S0 S0!val!0)\n"
      " (define-fun P ((x S0)) Bool (forall ((y S0)) (= x y)))\n"
      " (weird stuff))",
      c.script);
  const Model::Definition* p = m.Find("P");
  ASSERT_NE(p, nullptr);
  EXPECT_FALSE(p->evaluated);
  EXPECT_TRUE(p->table.empty());
  EXPECT_EQ(m.unparsed.size(), 2u);
  EXPECT_EQ(m.warnings.size(), 2u);
  EXPECT_TRUE(m.Find("a")->evaluated);
}

TEST(RunSolverTest, LfExampleIsSatWithCounterexample) {
  REQUIRE_SOLVER();
  smt::Compilation c = smt::CompileText(Golden("lf.fol"));
  SolverOutcome out = RunSolver(c.script, RealSolver());
  ASSERT_EQ(out.verdict, Verdict::kSat) << out.raw << out.error;
  ASSERT_TRUE(out.model.has_value());
  const Model& m = *out.model;
  std::string cval = *m.Value("c", {});
  bool tall_not_like = false;
  for (const std::string& e : m.domains.at("S0")) {
    if (m.Value("Tall", {e}) == "true" && m.Value("Like", {e, cval}) == "false") {
      tall_not_like = true;
    }
  }
  EXPECT_TRUE(tall_not_like);
  testing::ModelChecker check(c.signature, m);
  EXPECT_EQ(check.Eval(c.formula), false);
}

TEST(RunSolverTest, VExampleIsUnsat) {
  REQUIRE_SOLVER();
  SolverOutcome out =
      RunSolver(smt::CompileText(Golden("v.fol")).script, RealSolver());
  EXPECT_EQ(out.verdict, Verdict::kUnsat) << out.raw << out.error;
  EXPECT_FALSE(out.model.has_value());
  EXPECT_EQ(out.raw.find("error"), std::string::npos);
}

TEST(RunSolverTest, PropositionalCounterexample) {
  REQUIRE_SOLVER();
  SolverOutcome out = RunSolver(smt::CompileText("P -> Q").script, RealSolver());
  ASSERT_EQ(out.verdict, Verdict::kSat);
  EXPECT_EQ(out.model->Value("P", {}), "true");
  EXPECT_EQ(out.model->Value("Q", {}), "false");
}

TEST(RunSolverTest, InfiniteModelTimesOut) {
  REQUIRE_SOLVER();
  smt::Compilation c = smt::CompileText(
      "(forall x. exists y. R(x, y)) & (forall x. ~R(x, x)) & "
      "(forall x. forall y. forall z. (R(x, y) & R(y, z) -> R(x, z))) -> Never");
  const int children_before = CountChildren();
  auto start = std::chrono::steady_clock::now();
  SolverOutcome out = RunSolver(c.script, RealSolver(1.0));
  double elapsed = std::chrono::duration<double>(
                       std::chrono::steady_clock::now() - start)
                       .count();
  EXPECT_EQ(out.verdict, Verdict::kTimeout);
  EXPECT_FALSE(out.model.has_value());
  EXPECT_LT(elapsed, 3.0);
  EXPECT_EQ(CountChildren(), children_before);
}

TEST_F(FakeSolvers, TimeoutKillsWholeProcessGroup) {
  const std::string marker = "sleep 37.5" + std::to_string(getpid() % 1000);
  SolverConfig cfg = Fake("slow", marker + " &\nwait", 0.5);
  const int children_before = CountChildren();
  SolverOutcome out = RunSolver(Tautology(), cfg);
  EXPECT_EQ(out.verdict, Verdict::kTimeout);
  EXPECT_LT(out.wall_seconds, 2.0);
  EXPECT_EQ(CountChildren(), children_before);
  EXPECT_EQ(CountSurvivorsWith(marker), 0);
}

TEST_F(FakeSolvers, BackgroundDescendantDoesNotStallNormalExit) {
  const std::string marker = "sleep 38.5" + std::to_string(getpid() % 1000);
  SolverConfig cfg = Fake("leaky", marker + " &\necho unsat", 5.0);
  SolverOutcome out = RunSolver(Tautology(), cfg);
  EXPECT_EQ(out.verdict, Verdict::kUnsat);
  EXPECT_LT(out.wall_seconds, 2.0);
  EXPECT_EQ(CountSurvivorsWith(marker), 0);
}

TEST_F(FakeSolvers, UnsatNeverRequestsModel) {
  fs::path log = dir_ / "calls.log";
  SolverConfig cfg = Fake(
      "logger", "for a; do f=$a; done\ngrep -c get-model \"$f\" >> " +
                    log.string() + "\necho unsat");
  SolverOutcome out = RunSolver(Tautology(), cfg);
  EXPECT_EQ(out.verdict, Verdict::kUnsat);
  EXPECT_EQ(ReadFile(log.string()), "0\n");
}

TEST_F(FakeSolvers, SatRunsSecondPhaseWithModelRequest) {
  fs::path log = dir_ / "calls.log";
  SolverConfig cfg = Fake(
      "logger", "for a; do f=$a; done\ngrep -c get-model \"$f\" >> " +
                    log.string() +
                    "\necho sat\necho '((define-fun P () Bool false))'");
  SolverOutcome out = RunSolver(smt::CompileText("P").script, cfg);
  EXPECT_EQ(out.verdict, Verdict::kSat);
  EXPECT_EQ(ReadFile(log.string()), "0\n1\n");
  ASSERT_TRUE(out.model.has_value());
  EXPECT_EQ(out.model->Value("P", {}), "false");
}

TEST_F(FakeSolvers, ErrorOutputIsSolverError) {
  SolverOutcome out =
      RunSolver(Tautology(), Fake("err", "echo '(error \"line 3: bad\")'\necho sat"));
  EXPECT_EQ(out.verdict, Verdict::kSolverError);
  EXPECT_NE(out.error.find("bad"), std::string::npos);
  EXPECT_FALSE(out.model.has_value());
}

TEST_F(FakeSolvers, NonzeroExitWithoutVerdict) {
  SolverOutcome out =
      RunSolver(Tautology(), Fake("crash", "echo 'segfault-ish' >&2\nexit 3"));
  EXPECT_EQ(out.verdict, Verdict::kSolverError);
  EXPECT_NE(out.error.find("status 3"), std::string::npos);
  EXPECT_NE(out.stderr_text.find("segfault-ish"), std::string::npos);
}

TEST_F(FakeSolvers, UnknownVerdict) {
  SolverOutcome out = RunSolver(Tautology(), Fake("unk", "echo unknown"));
  EXPECT_EQ(out.verdict, Verdict::kUnknown);
  EXPECT_FALSE(out.model.has_value());
}

TEST_F(FakeSolvers, MalformedModelStillYieldsModelWithWarning) {
  SolverOutcome out =
      RunSolver(Tautology(), Fake("bad", "echo sat\necho '((define-fun'"));
  EXPECT_EQ(out.verdict, Verdict::kSat);
  ASSERT_TRUE(out.model.has_value());
  EXPECT_FALSE(out.model->warnings.empty());
}

TEST(RunSolverTest, MissingExecutable) {
  SolverConfig cfg;
  cfg.executable = "/nonexistent/solver-binary";
  SolverOutcome out = RunSolver(Tautology(), cfg);
  EXPECT_EQ(out.verdict, Verdict::kSolverError);
  EXPECT_FALSE(out.error.empty());
}

TEST(RunSolverOnTextTest, GoldenScriptsRoundTrip) {
  REQUIRE_SOLVER();
  SolverOutcome lf = RunSolverOnText(Golden("lf.smt2"), RealSolver());
  ASSERT_EQ(lf.verdict, Verdict::kSat) << lf.raw << lf.error;
  ASSERT_TRUE(lf.model.has_value());
  EXPECT_NE(lf.model->Find("Tall"), nullptr);
  EXPECT_NE(lf.model->Find("c"), nullptr);
  SolverOutcome v = RunSolverOnText(Golden("v.smt2"), RealSolver());
  EXPECT_EQ(v.verdict, Verdict::kUnsat);
  EXPECT_FALSE(v.model.has_value());
}

TEST_F(FakeSolvers, TextWithoutModelRequestRunsOnce) {
  fs::path log = dir_ / "calls.log";
  SolverConfig cfg = Fake(
      "logger", "for a; do f=$a; done\ngrep -c get-model \"$f\" >> " +
                    log.string() + "\necho sat");
  SolverOutcome out =
      RunSolverOnText("(declare-const P Bool)\n(assert P)\n(check-sat)\n", cfg);
  EXPECT_EQ(out.verdict, Verdict::kSat);
  EXPECT_EQ(ReadFile(log.string()), "0\n");
  EXPECT_FALSE(out.model.has_value());
}

TEST_F(FakeSolvers, TextWithModelRequestRunsTwice) {
  fs::path log = dir_ / "calls.log";
  SolverConfig cfg = Fake(
      "logger", "for a; do f=$a; done\ngrep -c get-model \"$f\" >> " +
                    log.string() +
                    "\necho sat\necho '((define-fun P () Bool true))'");
  SolverOutcome out = RunSolverOnText(
      "(declare-const P Bool)\n(assert P)\n(check-sat)\n(get-model)\n", cfg);
  EXPECT_EQ(out.verdict, Verdict::kSat);
  EXPECT_EQ(ReadFile(log.string()), "0\n1\n");
  ASSERT_TRUE(out.model.has_value());
  EXPECT_EQ(out.model->Value("P", {}), "true");
}

TEST(RunSolverOnTextTest, GarbageIsSolverError) {
  REQUIRE_SOLVER();
  SolverOutcome out = RunSolverOnText("(assert (frobnicate\n(check-sat)\n", RealSolver());
  EXPECT_EQ(out.verdict, Verdict::kSolverError);
}

// Properties against independent oracles.

TEST(SolverPropertyTest, AgreesWithTruthTable) {
  REQUIRE_SOLVER();
  std::mt19937_64 rng(123);
  for (int i = 0; i < 60; ++i) {
    fol::Formula f = testing::RandomPropositional(rng, 4, 4);
    SolverOutcome out = RunSolver(smt::Compile(f).script, RealSolver());
    ASSERT_TRUE(out.verdict == Verdict::kSat || out.verdict == Verdict::kUnsat)
        << fol::PrettyPrint(f) << out.raw;
    EXPECT_EQ(out.verdict == Verdict::kUnsat, testing::TruthTableValid(f))
        << fol::PrettyPrint(f);
  }
}

TEST(SolverPropertyTest, SatModelsFalsifyTheFormula) {
  REQUIRE_SOLVER();
  testing::GenOptions options;
  options.max_depth = 4;
  options.awkward_names = true;
  testing::FormulaGenerator gen(77, options);
  int checked = 0;
  for (int i = 0; i < 40; ++i) {
    fol::Formula f = gen.Next();
    smt::Compilation c = smt::Compile(f);
    SolverOutcome out = RunSolver(c.script, RealSolver());
    ASSERT_NE(out.verdict, Verdict::kSolverError)
        << fol::PrettyPrint(f) << "\n" << out.raw << out.error;
    if (out.verdict != Verdict::kSat) continue;
    std::optional<bool> v = testing::ModelChecker(c.signature, *out.model).Eval(f);
    if (!v) continue;  // the solver left part of the model unspecified
    ++checked;
    EXPECT_FALSE(*v) << fol::PrettyPrint(f) << "\n" << out.raw;
  }
  EXPECT_GT(checked, 10);
}

}  // namespace
}  // namespace nl2fol::solver
