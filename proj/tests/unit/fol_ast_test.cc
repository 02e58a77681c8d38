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

#include <gtest/gtest.h>

#include <random>

#include "nl2fol/fol/parser.h"
#include "tests/support/formula_gen.h"

namespace nl2fol::fol {
namespace {

using ::testing::Test;

Term V(const char* n) { return Term::Variable(n); }
Term C(const char* n) { return Term::Constant(n); }

Formula A(const char* pred, std::vector<Argument> args = {}) {
  return Formula::Atom(pred, std::move(args));
}

TEST(FreeVariablesTest, AllBound) {
  EXPECT_TRUE(FreeVariables(Formula::Forall("x", A("P", {V("x")}))).empty());
}

TEST(FreeVariablesTest, ConstantsAreNotVariables) {
  Formula f = Formula::And(A("P", {V("x")}), A("Q", {C("c")}));
  EXPECT_EQ(FreeVariables(f), std::set<std::string>{"x"});
}

TEST(FreeVariablesTest, BinderScoping) {
  Formula f = Formula::Exists(
      "a", Formula::And(A("P", {V("a")}), A("Q", {V("b")})));
  EXPECT_EQ(FreeVariables(f), std::set<std::string>{"b"});
}

TEST(CollectPredicatesTest, LfExampleProperties) {
  Formula f = Formula::And(A("Tall", {V("x")}), A("Love", {V("x"), C("c")}));
  std::map<std::string, int> expected = {{"Love", 2}, {"Tall", 1}};
  EXPECT_EQ(CollectPredicates(f), expected);
}

TEST(CollectPredicatesTest, ArityConflict) {
  Formula f = Formula::And(A("P", {V("x")}), A("P", {V("x"), V("y")}));
  try {
    CollectPredicates(f);
    FAIL() << "expected ArityConflict";
  } catch (const ArityConflict& e) {
    EXPECT_EQ(e.predicate(), "P");
    EXPECT_EQ(e.first(), 1);
    EXPECT_EQ(e.second(), 2);
  }
}

TEST(CollectPredicatesTest, ZeroAryProposition) {
  std::map<std::string, int> expected = {{"Rain", 0}};
  EXPECT_EQ(CollectPredicates(A("Rain")), expected);
}

TEST(CollectPredicatesTest, LooksInsideFormulaArguments) {
  Formula f = A("Holds", {A("Q", {C("c")})});
  std::map<std::string, int> expected = {{"Holds", 1}, {"Q", 1}};
  EXPECT_EQ(CollectPredicates(f), expected);
}

TEST(SubstituteTest, ReferringExpressions) {
  Formula f = A("JumpsOn", {C("x"), C("s")});
  Formula g = Substitute(f, {{"x", "boy"}, {"s", "skateboard"}});
  EXPECT_EQ(g, A("JumpsOn", {C("boy"), C("skateboard")}));
}

TEST(SubstituteTest, IdentityMapping) {
  Formula f = ParseFormula("forall x. (P(x,c) -> Q(c)) & R(d, e)");
  EXPECT_EQ(Substitute(f, {{"c", "c"}, {"d", "d"}}), f);
}

TEST(SubstituteTest, CaptureIsRejected) {
  Formula f = Formula::Forall("x", A("P", {V("x"), V("y")}));
  EXPECT_THROW(Substitute(f, {{"y", "x"}}), CaptureError);
}

TEST(SubstituteTest, BoundOccurrencesUntouched) {
  Formula f = Formula::And(Formula::Forall("x", A("P", {V("x")})),
                           A("P", {V("x")}));
  Formula g = Substitute(f, {{"x", "k"}});
  EXPECT_EQ(g, Formula::And(Formula::Forall("x", A("P", {V("x")})),
                            A("P", {V("k")})));
}

TEST(AlphaNormalizeTest, RenamesShadowedBinder) {
  Formula f = Formula::Forall(
      "x", Formula::Exists("x", A("P", {V("x")})));
  Formula g = AlphaNormalize(f);
  EXPECT_EQ(g, Formula::Forall("x", Formula::Exists("x1", A("P", {V("x1")}))));
}

TEST(AlphaNormalizeTest, SiblingBindersKeepTheirNames) {
  Formula f = Formula::And(Formula::Forall("x", A("P", {V("x")})),
                           Formula::Exists("x", A("Q", {V("x")})));
  EXPECT_EQ(AlphaNormalize(f), f);
}

TEST(AlphaNormalizeTest, BinderCollidingWithConstantIsRenamed) {
  Formula f = Formula::And(A("P", {C("x")}),
                           Formula::Forall("x", A("P", {V("x")})));
  Formula g = AlphaNormalize(f);
  EXPECT_EQ(g, Formula::And(A("P", {C("x")}),
                            Formula::Forall("x1", A("P", {V("x1")}))));
}

TEST(ConjunctsTest, FlattensNestedAnd) {
  Formula f = ParseFormula("A & (B & C) & D");
  std::vector<Formula> parts = Conjuncts(f);
  ASSERT_EQ(parts.size(), 4u);
  EXPECT_EQ(parts[1], A("B"));
  EXPECT_EQ(Formula::Conjunction(parts), ParseFormula("A & B & C & D"));
}

// Properties over generated formulas.
class AstPropertyTest : public Test {
 protected:
  testing::FormulaGenerator gen_{17, testing::GenOptions{}};
};

TEST_F(AstPropertyTest, SubstituteIdentityIsNoop) {
  for (int i = 0; i < 300; ++i) {
    Formula f = gen_.Next();
    std::map<std::string, std::string> id;
    for (const std::string& c : Constants(f)) id[c] = c;
    EXPECT_EQ(Substitute(f, id), f);
  }
}

TEST_F(AstPropertyTest, SubstitutePreservesPredicates) {
  for (int i = 0; i < 300; ++i) {
    Formula f = gen_.Next();
    std::map<std::string, std::string> m;
    for (const std::string& c : Constants(f)) m[c] = c + "_r";
    EXPECT_EQ(CollectPredicates(Substitute(f, m)), CollectPredicates(f));
  }
}

TEST_F(AstPropertyTest, FreeVariablesAfterSubstitute) {
  // Free variables are introduced directly so the law has something to
  // rename.
  std::mt19937_64 rng(5);
  for (int i = 0; i < 300; ++i) {
    Formula f = Formula::And(gen_.Next(), A("R", {V("fa"), V("fb")}));
    std::map<std::string, std::string> m = {{"fa", "ga"}};
    if (rng() % 2) m["fb"] = "fa";
    std::set<std::string> expected;
    for (const std::string& v : FreeVariables(f)) {
      auto it = m.find(v);
      expected.insert(it == m.end() ? v : it->second);
    }
    EXPECT_EQ(FreeVariables(Substitute(f, m)), expected);
  }
}

}  // namespace
}  // namespace nl2fol::fol
