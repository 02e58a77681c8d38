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

#include <cctype>

namespace nl2fol {

std::string SExpr::ToString() const {
  if (!is_list) return atom;
  std::string out = "(";
  for (size_t i = 0; i < items.size(); ++i) {
    if (i > 0) out += ' ';
    out += items[i].ToString();
  }
  out += ')';
  return out;
}

std::vector<SExpr> ParseSExprs(std::string_view text) {
  std::vector<SExpr> top;
  std::vector<SExpr> stack;  // open lists
  size_t i = 0;
  auto push = [&](SExpr e) {
    if (stack.empty()) {
      top.push_back(std::move(e));
    } else {
      stack.back().items.push_back(std::move(e));
    }
  };
  while (i < text.size()) {
    const char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (c == ';') {
      while (i < text.size() && text[i] != '\n') ++i;
    } else if (c == '(') {
      stack.push_back(SExpr::List({}));
      ++i;
    } else if (c == ')') {
      if (stack.empty()) {
        throw SExprError("unexpected ')' at offset " + std::to_string(i));
      }
      SExpr done = std::move(stack.back());
      stack.pop_back();
      push(std::move(done));
      ++i;
    } else if (c == '|') {
      size_t end = text.find('|', i + 1);
      if (end == std::string_view::npos) {
        throw SExprError("unterminated quoted symbol at offset " +
                         std::to_string(i));
      }
      push(SExpr::Atom(std::string(text.substr(i + 1, end - i - 1))));
      i = end + 1;
    } else if (c == '"') {
      // SMT-LIB escapes a quote inside a string by doubling it.
      size_t j = i + 1;
      while (true) {
        if (j >= text.size()) {
          throw SExprError("unterminated string at offset " +
                           std::to_string(i));
        }
        if (text[j] == '"') {
          if (j + 1 < text.size() && text[j + 1] == '"') {
            j += 2;
            continue;
          }
          break;
        }
        ++j;
      }
      push(SExpr::Atom(std::string(text.substr(i, j - i + 1))));
      i = j + 1;
    } else {
      size_t j = i;
      while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j])) &&
             text[j] != '(' && text[j] != ')' && text[j] != ';' &&
             text[j] != '|' && text[j] != '"') {
        ++j;
      }
      push(SExpr::Atom(std::string(text.substr(i, j - i))));
      i = j;
    }
  }
  if (!stack.empty()) throw SExprError("unbalanced '(' at end of input");
  return top;
}

}  // namespace nl2fol
