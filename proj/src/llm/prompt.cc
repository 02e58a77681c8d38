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

#include "nl2fol/llm/prompt.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "nl2fol/fol/ast.h"

namespace nl2fol::llm {

UnboundPlaceholder::UnboundPlaceholder(std::string template_id,
                                       std::string placeholder)
    : TemplateError("template " + template_id + ": placeholder {{" +
                    placeholder + "}} is not bound"),
      placeholder_(std::move(placeholder)) {}

const std::vector<std::string>& TemplateIds() {
  static const std::vector<std::string> kIds = {
      "end_to_end", "claim_implication", "entities",        "entity_relation",
      "properties", "nli_relation",      "fol_formulation", "interpret"};
  return kIds;
}

namespace {

struct Tag {
  enum class Kind { kPlaceholder, kOpen, kClose };
  Kind kind;
  std::string name;
  size_t begin;  // offset of "{{"
  size_t end;    // offset past "}}"
};

// Finds the next tag at or after `from`; returns false when there is none.
bool NextTag(const std::string& text, size_t from, const std::string& id,
             Tag& tag) {
  size_t open = text.find("{{", from);
  if (open == std::string::npos) return false;
  size_t close = text.find("}}", open + 2);
  if (close == std::string::npos) {
    throw TemplateError("template " + id + ": unterminated '{{' at offset " +
                        std::to_string(open));
  }
  std::string inner = text.substr(open + 2, close - open - 2);
  tag.begin = open;
  tag.end = close + 2;
  tag.kind = Tag::Kind::kPlaceholder;
  if (!inner.empty() && inner[0] == '?') {
    tag.kind = Tag::Kind::kOpen;
    inner.erase(0, 1);
  } else if (!inner.empty() && inner[0] == '/') {
    tag.kind = Tag::Kind::kClose;
    inner.erase(0, 1);
  }
  if (!fol::IsIdentifier(inner)) {
    throw TemplateError("template " + id + ": bad placeholder name '" + inner +
                        "'");
  }
  tag.name = std::move(inner);
  return true;
}

std::string ReadFile(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string TrimTrailingNewlines(std::string s) {
  while (!s.empty() && (s.back() == '\n' || s.back() == '\r')) s.pop_back();
  return s;
}

}  // namespace

PromptTemplate::PromptTemplate(std::string id, std::string text)
    : id_(std::move(id)), text_(std::move(text)) {
  std::string open_section;
  Tag tag;
  size_t pos = 0;
  while (NextTag(text_, pos, id_, tag)) {
    switch (tag.kind) {
      case Tag::Kind::kPlaceholder:
        (open_section.empty() ? required_ : optional_).insert(tag.name);
        break;
      case Tag::Kind::kOpen:
        if (!open_section.empty()) {
          throw TemplateError("template " + id_ + ": nested optional section");
        }
        open_section = tag.name;
        optional_.insert(tag.name);
        break;
      case Tag::Kind::kClose:
        if (tag.name != open_section) {
          throw TemplateError("template " + id_ + ": unmatched {{/" +
                              tag.name + "}}");
        }
        open_section.clear();
        break;
    }
    pos = tag.end;
  }
  if (!open_section.empty()) {
    throw TemplateError("template " + id_ + ": unclosed {{?" + open_section +
                        "}}");
  }
  for (const std::string& r : required_) optional_.erase(r);
}

std::string PromptTemplate::Render(const Bindings& bindings) const {
  for (const std::string& r : required_) {
    if (bindings.count(r) == 0) throw UnboundPlaceholder(id_, r);
  }
  auto lookup = [&](const std::string& name) -> std::string {
    auto it = bindings.find(name);
    return it == bindings.end() ? std::string() : it->second;
  };
  std::string out;
  bool skipping = false;
  Tag tag;
  size_t pos = 0;
  while (NextTag(text_, pos, id_, tag)) {
    if (!skipping) out.append(text_, pos, tag.begin - pos);
    switch (tag.kind) {
      case Tag::Kind::kPlaceholder:
        if (!skipping) out += lookup(tag.name);
        break;
      case Tag::Kind::kOpen:
        skipping = lookup(tag.name).empty();
        break;
      case Tag::Kind::kClose:
        skipping = false;
        break;
    }
    pos = tag.end;
  }
  out.append(text_, pos, std::string::npos);
  return out;
}

PromptLibrary PromptLibrary::Load(const std::string& dir) {
  namespace fs = std::filesystem;
  PromptLibrary lib;
  for (const std::string& id : TemplateIds()) {
    fs::path p = fs::path(dir) / (id + ".txt");
    if (!fs::is_regular_file(p)) {
      throw ConfigError("prompt template missing: " + p.string());
    }
    std::string few;
    fs::path fp = fs::path(dir) / "few_shot" / (id + ".txt");
    if (fs::is_regular_file(fp)) few = TrimTrailingNewlines(ReadFile(fp));
    lib.Add(PromptTemplate(id, TrimTrailingNewlines(ReadFile(p))), few);
  }
  return lib;
}

std::string PromptLibrary::DefaultDirectory() { return NL2FOL_PROMPT_DIR; }

void PromptLibrary::Add(PromptTemplate t, std::string few_shot) {
  std::string id = t.id();
  few_shot_[id] = std::move(few_shot);
  templates_.insert_or_assign(id, std::move(t));
}

const PromptTemplate& PromptLibrary::Get(std::string_view id) const {
  auto it = templates_.find(id);
  if (it == templates_.end()) {
    throw TemplateError("unknown template id '" + std::string(id) + "'");
  }
  return it->second;
}

const std::string& PromptLibrary::FewShot(std::string_view id) const {
  static const std::string kEmpty;
  auto it = few_shot_.find(id);
  return it == few_shot_.end() ? kEmpty : it->second;
}

bool PromptLibrary::Has(std::string_view id) const {
  return templates_.find(id) != templates_.end();
}

std::string PromptLibrary::Render(std::string_view id,
                                  const Bindings& bindings) const {
  const PromptTemplate& t = Get(id);
  Bindings b = bindings;
  if (b.count("few_shot") == 0) b["few_shot"] = FewShot(id);
  return t.Render(b);
}

}  // namespace nl2fol::llm
