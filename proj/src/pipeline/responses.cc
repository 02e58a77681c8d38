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

#include "nl2fol/pipeline/responses.h"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "nl2fol/fol/parser.h"

namespace nl2fol::pipeline {
namespace {

std::string Trim(std::string_view s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::string Lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::vector<std::string> Lines(std::string_view text) {
  std::vector<std::string> out;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) out.push_back(line);
  return out;
}

// Drops list markers ("-", "*", "1.", "•") and surrounding markdown emphasis.
std::string StripBullet(std::string_view line) {
  std::string s = Trim(line);
  if (s.rfind("\xE2\x80\xA2", 0) == 0) s = Trim(s.substr(3));
  while (!s.empty() && (s[0] == '-' || s[0] == '*')) s = Trim(s.substr(1));
  size_t i = 0;
  while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
  if (i > 0 && i < s.size() && (s[i] == '.' || s[i] == ')')) s = Trim(s.substr(i + 1));
  while (!s.empty() && s.back() == '*') s.pop_back();
  return Trim(s);
}

std::string StripQuotes(std::string s) {
  s = Trim(s);
  auto strip_pair = [&](const std::string& open, const std::string& close) {
    if (s.size() >= open.size() + close.size() && s.rfind(open, 0) == 0 &&
        s.compare(s.size() - close.size(), close.size(), close) == 0) {
      s = Trim(s.substr(open.size(), s.size() - open.size() - close.size()));
      return true;
    }
    return false;
  };
  strip_pair("\"", "\"") || strip_pair("\xE2\x80\x9C", "\xE2\x80\x9D") ||
      strip_pair("'", "'");
  return s;
}

// If `line` starts with `label` followed by ':' (case-insensitive), returns
// the rest of the line.
std::optional<std::string> AfterLabel(std::string_view line,
                                      std::string_view label) {
  std::string s = StripBullet(line);
  if (s.size() <= label.size()) return std::nullopt;
  if (Lower(s.substr(0, label.size())) != Lower(label)) return std::nullopt;
  std::string rest = Trim(s.substr(label.size()));
  if (rest.empty() || rest[0] != ':') return std::nullopt;
  return Trim(rest.substr(1));
}

void ReplaceAll(std::string& s, std::string_view from, std::string_view to) {
  size_t pos = 0;
  while ((pos = s.find(from, pos)) != std::string::npos) {
    s.replace(pos, from.size(), to);
    pos += to.size();
  }
}

// Splits on commas outside parentheses.
std::vector<std::string> SplitTopLevel(std::string_view s) {
  std::vector<std::string> out;
  int depth = 0;
  std::string cur;
  for (char c : s) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (c == ',' && depth == 0) {
      out.push_back(Trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(Trim(cur));
  return out;
}

}  // namespace

std::optional<ClaimImplication> ParseClaimImplicationResponse(
    std::string_view text) {
  ClaimImplication ci;
  bool have_implication = false;
  for (const std::string& line : Lines(text)) {
    if (auto claim = AfterLabel(line, "Claim")) {
      std::string c = StripQuotes(*claim);
      if (!c.empty()) ci.claims.push_back(c);
    } else if (auto impl = AfterLabel(line, "Implication")) {
      std::string i = StripQuotes(*impl);
      if (!i.empty() && !have_implication) {
        ci.implication = i;
        have_implication = true;
      }
    }
  }
  if (!have_implication) return std::nullopt;
  return ci;
}

std::vector<EntityMention> ParseReferringExpressions(std::string_view text) {
  std::vector<std::string> items;
  bool in_list = false;
  for (const std::string& line : Lines(text)) {
    if (auto rest = AfterLabel(line, "Referring expressions")) {
      in_list = true;
      if (!rest->empty()) {
        for (std::string& item : SplitTopLevel(*rest)) items.push_back(item);
      }
      continue;
    }
    if (!in_list) continue;
    std::string s = StripBullet(line);
    if (s.empty()) continue;
    items.push_back(s);
  }
  if (!in_list) {
    // Bare answer without the header.
    for (const std::string& line : Lines(text)) {
      std::string s = StripBullet(line);
      if (s.empty()) continue;
      for (std::string& item : SplitTopLevel(s)) items.push_back(item);
    }
  }
  std::vector<EntityMention> out;
  for (std::string item : items) {
    item = StripQuotes(item);
    if (item.empty()) continue;
    // Subset notation belongs to the relation stage.
    if (item.find("\xE2\x8A\x86") != std::string::npos ||
        item.find("\xE2\x8A\x82") != std::string::npos ||
        item.find("subseteq") != std::string::npos) {
      continue;
    }
    EntityMention m;
    size_t colon = item.rfind(':');
    if (colon == std::string::npos) {
      m.text = item;
    } else {
      m.text = StripQuotes(item.substr(0, colon));
      m.symbol = Trim(item.substr(colon + 1));
    }
    if (!m.text.empty()) out.push_back(std::move(m));
  }
  return out;
}

std::optional<int> ParseRelationChoice(std::string_view text) {
  std::string t(text);
  std::string lower = Lower(t);
  size_t at = lower.rfind("answer");
  std::string_view scan = t;
  if (at != std::string::npos) scan = std::string_view(t).substr(at);
  for (char c : scan) {
    if (c >= '1' && c <= '4') return c - '0';
    if (std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
  }
  return std::nullopt;
}

std::vector<fol::Formula> ParsePropertiesResponse(std::string_view text) {
  std::string body;
  bool found = false;
  for (const std::string& line : Lines(text)) {
    if (auto rest = AfterLabel(line, "Properties")) {
      body = *rest;
      found = true;
    } else if (found && !Trim(line).empty() && body.empty()) {
      body = Trim(line);
    }
  }
  if (!found) body = Trim(text);
  body = Trim(body);
  while (!body.empty() && body.back() == '.') body.pop_back();
  return fol::ParseAtomList(body);
}

std::string ExtractLogicalForm(std::string_view text) {
  std::string t(text);
  std::string lower = Lower(t);
  const std::string marker = "logical form:";
  size_t at = lower.rfind(marker);
  std::string body = at == std::string::npos ? t : t.substr(at + marker.size());
  // Multi-line answers are joined; trailing prose after a blank line is cut.
  std::string joined;
  bool started = false;
  for (const std::string& line : Lines(body)) {
    std::string s = Trim(line);
    if (s.empty()) {
      if (started) break;
      continue;
    }
    started = true;
    if (!joined.empty()) joined += ' ';
    joined += s;
  }
  joined = StripQuotes(joined);
  if (joined.size() >= 2 && joined.front() == '`' && joined.back() == '`') {
    joined = Trim(joined.substr(1, joined.size() - 2));
  }
  while (!joined.empty() && joined.back() == '.') joined.pop_back();
  ReplaceAll(joined, "\xE2\x88\xA7", "&");    // ∧
  ReplaceAll(joined, "\xE2\x88\xA8", "|");    // ∨
  ReplaceAll(joined, "\xC2\xAC", "~");        // ¬
  ReplaceAll(joined, "\xE2\x87\x92", "->");   // ⇒
  ReplaceAll(joined, "\xE2\x86\x92", "->");   // →
  return Trim(joined);
}

std::optional<Classification::Label> ParseEndToEndAnswer(std::string_view text) {
  std::string lower = Lower(text);
  size_t at = lower.rfind("answer:");
  if (at != std::string::npos) lower = lower.substr(at);
  size_t fallacy = lower.find("fallacy");
  size_t valid = lower.find("valid");
  if (fallacy == std::string::npos && valid == std::string::npos) {
    return std::nullopt;
  }
  // "invalid" mentions a fallacy.
  if (valid != std::string::npos && valid >= 2 &&
      lower.compare(valid - 2, 2, "in") == 0) {
    valid = std::string::npos;
  }
  if (fallacy != std::string::npos &&
      (valid == std::string::npos || fallacy < valid)) {
    return Classification::Label::kFallacy;
  }
  if (valid == std::string::npos) return Classification::Label::kFallacy;
  return Classification::Label::kValid;
}

std::string SymbolFromPhrase(std::string_view phrase) {
  std::string out;
  bool upper_next = false;
  for (char c : phrase) {
    unsigned char u = static_cast<unsigned char>(c);
    if (std::isalnum(u) && u < 128) {
      if (out.empty()) {
        out += static_cast<char>(std::tolower(u));
      } else {
        out += upper_next ? static_cast<char>(std::toupper(u)) : c;
      }
      upper_next = false;
    } else if (c == '\'') {
      // possessive: "neighbour's" -> "neighbours"
    } else {
      upper_next = !out.empty();
    }
  }
  if (out.empty()) return "e";
  if (std::isdigit(static_cast<unsigned char>(out[0]))) out = "e" + out;
  std::string lower = Lower(out);
  if (lower == "forall" || lower == "exists") out += "_";
  return out;
}

}  // namespace nl2fol::pipeline
