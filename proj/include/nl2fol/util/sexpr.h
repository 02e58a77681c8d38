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

#ifndef NL2FOL_UTIL_SEXPR_H_
#define NL2FOL_UTIL_SEXPR_H_

#include <string>
#include <string_view>
#include <vector>

#include "nl2fol/util/error.h"

namespace nl2fol {

class SExprError : public Error {
 public:
  using Error::Error;
};

// SMT-LIB style s-expression. Quoted symbols keep their bars in `atom`
// only when `ToString` needs them; the reader strips them.
struct SExpr {
  bool is_list = false;
  std::string atom;
  std::vector<SExpr> items;

  static SExpr Atom(std::string text) { return SExpr{false, std::move(text), {}}; }
  static SExpr List(std::vector<SExpr> items) {
    return SExpr{true, {}, std::move(items)};
  }

  bool IsAtom(std::string_view text) const { return !is_list && atom == text; }
  // True for a list whose head is the atom `head`.
  bool HasHead(std::string_view head) const {
    return is_list && !items.empty() && items[0].IsAtom(head);
  }
  std::string ToString() const;

  friend bool operator==(const SExpr&, const SExpr&) = default;
};

// Reads every top-level s-expression in `text`. Skips `;` line comments.
// `|quoted symbols|` come back without bars; "strings" keep their quotes.
// Throws SExprError on unbalanced parentheses or unterminated literals.
std::vector<SExpr> ParseSExprs(std::string_view text);

}  // namespace nl2fol

#endif  // NL2FOL_UTIL_SEXPR_H_
