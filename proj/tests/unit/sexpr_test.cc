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

#include "nl2fol/util/sexpr.h"

#include <gtest/gtest.h>

namespace nl2fol {
namespace {

TEST(SExprTest, NestedListsAndAtoms) {
  std::vector<SExpr> v = ParseSExprs("(a (b c) ()) d");
  ASSERT_EQ(v.size(), 2u);
  EXPECT_TRUE(v[0].HasHead("a"));
  EXPECT_EQ(v[0].items[1].items[1].atom, "c");
  EXPECT_TRUE(v[0].items[2].is_list);
  EXPECT_TRUE(v[0].items[2].items.empty());
  EXPECT_TRUE(v[1].IsAtom("d"));
  EXPECT_EQ(v[0].ToString(), "(a (b c) ())");
}

TEST(SExprTest, CommentsQuotedSymbolsAndStrings) {
  std::vector<SExpr> v = ParseSExprs(
      ";; universe for S0:\n"
      ";;   S0!val!0\n"
      "(define-fun |a b| () S0 \"x\"\"y\") ; trailing\n");
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].items[1].atom, "a b");
  EXPECT_EQ(v[0].items[4].atom, "\"x\"\"y\"");
}

TEST(SExprTest, EmptyInput) {
  EXPECT_TRUE(ParseSExprs("").empty());
  EXPECT_TRUE(ParseSExprs("  ; only a comment").empty());
}

TEST(SExprTest, Unbalanced) {
  EXPECT_THROW(ParseSExprs("(a (b)"), SExprError);
  EXPECT_THROW(ParseSExprs("a)"), SExprError);
  EXPECT_THROW(ParseSExprs("(|abc)"), SExprError);
  EXPECT_THROW(ParseSExprs("(\"abc)"), SExprError);
}

}  // namespace
}  // namespace nl2fol
