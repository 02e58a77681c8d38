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

#include "nl2fol/fol/parser.h"

#include <algorithm>
#include <cctype>
#include <utility>

namespace nl2fol::fol {

LexError::LexError(size_t offset, std::string snippet)
    : SyntaxError(offset, "unexpected character near '" + snippet + "'"),
      snippet_(std::move(snippet)) {}

ParseError::ParseError(size_t offset, std::string expected, std::string found)
    : SyntaxError(offset, "expected " + expected + ", found " + found),
      expected_(std::move(expected)),
      found_(std::move(found)) {}

UnbalancedParens::UnbalancedParens(size_t offset)
    : SyntaxError(offset, "unbalanced parentheses") {}

const char* TokenKindName(TokenKind kind) {
  switch (kind) {
    case TokenKind::kIdent: return "identifier";
    case TokenKind::kLParen: return "'('";
    case TokenKind::kRParen: return "')'";
    case TokenKind::kComma: return "','";
    case TokenKind::kAnd: return "'&'";
    case TokenKind::kOr: return "'|'";
    case TokenKind::kNot: return "'~'";
    case TokenKind::kImplies: return "'->'";
    case TokenKind::kForall: return "'forall'";
    case TokenKind::kExists: return "'exists'";
    case TokenKind::kDot: return "'.'";
  }
  return "?";
}

namespace {

constexpr std::string_view kForallGlyph = "\xE2\x88\x80";  // U+2200
constexpr std::string_view kExistsGlyph = "\xE2\x88\x83";  // U+2203
constexpr int kMaxNesting = 400;

bool EqualsIgnoreCase(std::string_view a, std::string_view b) {
  return a.size() == b.size() &&
         std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) ==
                  std::tolower(static_cast<unsigned char>(y));
         });
}

std::string Snippet(std::string_view source, size_t offset) {
  return std::string(source.substr(offset, 8));
}

}  // namespace

std::vector<Token> Tokenize(std::string_view source) {
  std::vector<Token> tokens;
  size_t i = 0;
  auto emit = [&](TokenKind kind, size_t length) {
    tokens.push_back(Token{kind, std::string(source.substr(i, length)), i});
    i += length;
  };
  while (i < source.size()) {
    const unsigned char c = static_cast<unsigned char>(source[i]);
    if (std::isspace(c)) {
      ++i;
      continue;
    }
    if (std::isalpha(c)) {
      size_t j = i + 1;
      while (j < source.size() &&
             (std::isalnum(static_cast<unsigned char>(source[j])) ||
              source[j] == '_')) {
        ++j;
      }
      std::string_view word = source.substr(i, j - i);
      TokenKind kind = TokenKind::kIdent;
      if (EqualsIgnoreCase(word, "forall")) kind = TokenKind::kForall;
      if (EqualsIgnoreCase(word, "exists")) kind = TokenKind::kExists;
      emit(kind, j - i);
      continue;
    }
    std::string_view rest = source.substr(i);
    if (rest.starts_with(kForallGlyph)) {
      emit(TokenKind::kForall, kForallGlyph.size());
    } else if (rest.starts_with(kExistsGlyph)) {
      emit(TokenKind::kExists, kExistsGlyph.size());
    } else if (rest.starts_with("->") || rest.starts_with("=>")) {
      emit(TokenKind::kImplies, 2);
    } else if (c == '(') {
      emit(TokenKind::kLParen, 1);
    } else if (c == ')') {
      emit(TokenKind::kRParen, 1);
    } else if (c == ',') {
      emit(TokenKind::kComma, 1);
    } else if (c == '&') {
      emit(TokenKind::kAnd, 1);
    } else if (c == '|') {
      emit(TokenKind::kOr, 1);
    } else if (c == '~') {
      emit(TokenKind::kNot, 1);
    } else if (c == '.') {
      emit(TokenKind::kDot, 1);
    } else {
      throw LexError(i, Snippet(source, i));
    }
  }
  return tokens;
}

namespace {

class Parser {
 public:
  explicit Parser(std::span<const Token> tokens) : tokens_(tokens) {}

  Formula ParseAll() {
    CheckBalance();
    Formula f = ParseImplies();
    if (!AtEnd()) Fail("end of input");
    return f;
  }

  std::vector<Formula> ParseAtoms() {
    CheckBalance();
    std::vector<Formula> atoms;
    if (AtEnd()) return atoms;
    while (true) {
      atoms.push_back(ParseAtom());
      if (AtEnd()) break;
      Expect(TokenKind::kComma);
    }
    return atoms;
  }

 private:
  bool AtEnd() const { return pos_ >= tokens_.size(); }

  bool Peek(TokenKind kind, size_t ahead = 0) const {
    return pos_ + ahead < tokens_.size() &&
           tokens_[pos_ + ahead].kind == kind;
  }

  size_t Offset() const {
    if (!AtEnd()) return tokens_[pos_].offset;
    if (tokens_.empty()) return 0;
    return tokens_.back().offset + tokens_.back().text.size();
  }

  [[noreturn]] void Fail(const std::string& expected) const {
    std::string found =
        AtEnd() ? "end of input" : "'" + tokens_[pos_].text + "'";
    throw ParseError(Offset(), expected, found);
  }

  const Token& Expect(TokenKind kind) {
    if (!Peek(kind)) Fail(TokenKindName(kind));
    return tokens_[pos_++];
  }

  void CheckBalance() const {
    std::vector<size_t> open;
    for (const Token& t : tokens_) {
      if (t.kind == TokenKind::kLParen) {
        open.push_back(t.offset);
      } else if (t.kind == TokenKind::kRParen) {
        if (open.empty()) throw UnbalancedParens(t.offset);
        open.pop_back();
      }
    }
    if (!open.empty()) throw UnbalancedParens(open.back());
  }

  struct DepthGuard {
    explicit DepthGuard(Parser& p) : parser(p) {
      if (++parser.depth_ > kMaxNesting) parser.Fail("shallower nesting");
    }
    ~DepthGuard() { --parser.depth_; }
    Parser& parser;
  };

  Formula ParseImplies() {
    DepthGuard guard(*this);
    Formula lhs = ParseOr();
    if (Peek(TokenKind::kImplies)) {
      ++pos_;
      return Formula::Implies(std::move(lhs), ParseImplies());
    }
    return lhs;
  }

  Formula ParseOr() {
    Formula lhs = ParseAnd();
    while (Peek(TokenKind::kOr)) {
      ++pos_;
      lhs = Formula::Or(std::move(lhs), ParseAnd());
    }
    return lhs;
  }

  Formula ParseAnd() {
    Formula lhs = ParseUnary();
    while (Peek(TokenKind::kAnd)) {
      ++pos_;
      lhs = Formula::And(std::move(lhs), ParseUnary());
    }
    return lhs;
  }

  Formula ParseUnary() {
    DepthGuard guard(*this);
    if (Peek(TokenKind::kNot)) {
      ++pos_;
      return Formula::Not(ParseUnary());
    }
    if (Peek(TokenKind::kForall) || Peek(TokenKind::kExists)) {
      return ParseQuantified();
    }
    return ParsePrimary();
  }

  Formula ParseQuantified() {
    const bool universal = tokens_[pos_++].kind == TokenKind::kForall;
    std::string var;
    if (Peek(TokenKind::kLParen) && Peek(TokenKind::kIdent, 1) &&
        Peek(TokenKind::kRParen, 2)) {
      var = tokens_[pos_ + 1].text;
      pos_ += 3;
    } else {
      var = Expect(TokenKind::kIdent).text;
    }
    bound_.push_back(var);
    Formula body = [&] {
      if (Peek(TokenKind::kDot)) {
        ++pos_;
        return ParseImplies();
      }
      return ParseUnary();
    }();
    bound_.pop_back();
    return universal ? Formula::Forall(std::move(var), std::move(body))
                     : Formula::Exists(std::move(var), std::move(body));
  }

  Formula ParsePrimary() {
    if (Peek(TokenKind::kLParen)) {
      ++pos_;
      Formula inner = ParseImplies();
      Expect(TokenKind::kRParen);
      return inner;
    }
    if (Peek(TokenKind::kIdent)) return ParseAtom();
    Fail("formula");
  }

  Formula ParseAtom() {
    std::string name = Expect(TokenKind::kIdent).text;
    std::vector<Argument> args;
    if (Peek(TokenKind::kLParen)) {
      ++pos_;
      if (!Peek(TokenKind::kRParen)) {
        while (true) {
          args.push_back(ParseArgument());
          if (Peek(TokenKind::kComma)) {
            ++pos_;
            continue;
          }
          break;
        }
      }
      Expect(TokenKind::kRParen);
    }
    return Formula::Atom(std::move(name), std::move(args));
  }

  Argument ParseArgument() {
    if (Peek(TokenKind::kIdent) &&
        (Peek(TokenKind::kComma, 1) || Peek(TokenKind::kRParen, 1))) {
      const std::string& name = tokens_[pos_++].text;
      if (std::find(bound_.begin(), bound_.end(), name) != bound_.end()) {
        return Term::Variable(name);
      }
      return Term::Constant(name);
    }
    return ParseImplies();
  }

  std::span<const Token> tokens_;
  size_t pos_ = 0;
  int depth_ = 0;
  std::vector<std::string> bound_;
};

// Binding strength used by the printer; larger binds tighter.
int Precedence(FormulaKind kind) {
  switch (kind) {
    case FormulaKind::kImplies: return 1;
    case FormulaKind::kOr: return 2;
    case FormulaKind::kAnd: return 3;
    default: return 4;
  }
}

const char* OperatorText(FormulaKind kind) {
  switch (kind) {
    case FormulaKind::kAnd: return " & ";
    case FormulaKind::kOr: return " | ";
    case FormulaKind::kImplies: return " -> ";
    default: return "";
  }
}

void Print(const Formula& f, std::string& out);

void PrintParenthesized(const Formula& f, bool parens, std::string& out) {
  if (parens) out += '(';
  Print(f, out);
  if (parens) out += ')';
}

void Print(const Formula& f, std::string& out) {
  switch (f.kind()) {
    case FormulaKind::kAtom: {
      out += f.predicate();
      if (f.args().empty()) return;
      out += '(';
      bool first = true;
      for (const Argument& arg : f.args()) {
        if (!first) out += ',';
        first = false;
        if (const Term* t = std::get_if<Term>(&arg)) {
          out += t->name;
        } else {
          const Formula& nested = std::get<Formula>(arg);
          // A bare 0-ary atom would read back as a term.
          PrintParenthesized(nested, nested.is_atom() && nested.args().empty(),
                             out);
        }
      }
      out += ')';
      return;
    }
    case FormulaKind::kNot: {
      const Formula& operand = f.operand();
      out += '~';
      PrintParenthesized(operand,
                         operand.is_binary() || operand.is_quantifier(), out);
      return;
    }
    case FormulaKind::kAnd:
    case FormulaKind::kOr:
    case FormulaKind::kImplies: {
      const int prec = Precedence(f.kind());
      const bool right_assoc = f.kind() == FormulaKind::kImplies;
      const Formula& lhs = f.lhs();
      const Formula& rhs = f.rhs();
      const bool lhs_parens =
          lhs.is_quantifier() || Precedence(lhs.kind()) < prec ||
          (right_assoc && Precedence(lhs.kind()) == prec);
      const bool rhs_parens =
          rhs.is_quantifier() || Precedence(rhs.kind()) < prec ||
          (!right_assoc && Precedence(rhs.kind()) == prec);
      PrintParenthesized(lhs, lhs_parens, out);
      out += OperatorText(f.kind());
      PrintParenthesized(rhs, rhs_parens, out);
      return;
    }
    case FormulaKind::kForall:
    case FormulaKind::kExists:
      out += f.kind() == FormulaKind::kForall ? "forall " : "exists ";
      out += f.bound_variable();
      out += ". ";
      PrintParenthesized(f.body(), f.body().is_binary(), out);
      return;
  }
}

}  // namespace

Formula Parse(std::span<const Token> tokens) {
  return AlphaNormalize(Parser(tokens).ParseAll());
}

Formula ParseFormula(std::string_view source) {
  std::vector<Token> tokens = Tokenize(source);
  return Parse(tokens);
}

std::vector<Formula> ParseAtomList(std::string_view source) {
  std::vector<Token> tokens = Tokenize(source);
  return Parser(tokens).ParseAtoms();
}

std::string PrettyPrint(const Formula& f) {
  std::string out;
  Print(f, out);
  return out;
}

std::string PrettyPrint(const Term& t) { return t.name; }

}  // namespace nl2fol::fol
