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

// Textual FOL notation: lexer, recursive-descent parser and printer.
//
// Grammar (see docs/grammar.md):
//
//   formula    := disjunction [ IMPLIES formula ]
//   disjunction:= conjunction { OR conjunction }
//   conjunction:= unary { AND unary }
//   unary      := NOT unary | quantified | primary
//   quantified := (FORALL | EXISTS) binder ( DOT formula | unary )
//   binder     := IDENT | LPAREN IDENT RPAREN
//   primary    := LPAREN formula RPAREN | atom
//   atom       := IDENT [ LPAREN [ arg { COMMA arg } ] RPAREN ]
//   arg        := IDENT (when followed by COMMA or RPAREN) | formula
//
// Precedence, tightest first: NOT, AND, OR, IMPLIES. IMPLIES associates to
// the right, AND and OR to the left.

#ifndef NL2FOL_FOL_PARSER_H_
#define NL2FOL_FOL_PARSER_H_

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nl2fol/fol/ast.h"
#include "nl2fol/util/error.h"

namespace nl2fol::fol {

// Any positioned syntax failure. offset() is a byte offset into the source.
class SyntaxError : public Error {
 public:
  SyntaxError(size_t offset, const std::string& message)
      : Error("at offset " + std::to_string(offset) + ": " + message),
        offset_(offset) {}
  size_t offset() const { return offset_; }

 private:
  size_t offset_;
};

class LexError : public SyntaxError {
 public:
  LexError(size_t offset, std::string snippet);
  const std::string& snippet() const { return snippet_; }

 private:
  std::string snippet_;
};

class ParseError : public SyntaxError {
 public:
  ParseError(size_t offset, std::string expected, std::string found);
  const std::string& expected() const { return expected_; }
  const std::string& found() const { return found_; }

 private:
  std::string expected_;
  std::string found_;
};

class UnbalancedParens : public SyntaxError {
 public:
  explicit UnbalancedParens(size_t offset);
};

enum class TokenKind {
  kIdent,
  kLParen,
  kRParen,
  kComma,
  kAnd,
  kOr,
  kNot,
  kImplies,
  kForall,
  kExists,
  kDot,
};

const char* TokenKindName(TokenKind kind);

struct Token {
  TokenKind kind;
  std::string text;  // exact source slice
  size_t offset;

  friend bool operator==(const Token&, const Token&) = default;
};

// Lexes `source`. Accepts `->` and `=>` for implication, `&`, `|`, `~`,
// case-insensitive `forall`/`exists`, and the UTF-8 glyphs for the two
// quantifiers. Throws LexError on anything else.
std::vector<Token> Tokenize(std::string_view source);

// Parses a complete token stream. Binders are alpha-normalized (see
// AlphaNormalize). Throws ParseError or UnbalancedParens.
Formula Parse(std::span<const Token> tokens);

// Tokenize + Parse.
Formula ParseFormula(std::string_view source);

// Parses a comma-separated list of atoms such as "Tall(x), Love(x, c)".
// Every name in term position is a constant.
std::vector<Formula> ParseAtomList(std::string_view source);

// Canonical ASCII rendering with minimal parentheses. Quantifiers print as
// `forall x. body`; a binary body is parenthesized. Round-trips through
// ParseFormula for alpha-normalized formulas.
std::string PrettyPrint(const Formula& f);

std::string PrettyPrint(const Term& t);

}  // namespace nl2fol::fol

#endif  // NL2FOL_FOL_PARSER_H_
