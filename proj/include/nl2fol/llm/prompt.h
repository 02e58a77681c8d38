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

// Prompt templates.
//
// Templates are plain text files named <id>.txt. `{{name}}` is a required
// placeholder. `{{?name}}...{{/name}}` is an optional section, emitted only
// when `name` is bound to a nonempty value; placeholders inside it are not
// required. `{{few_shot}}` is filled from few_shot/<id>.txt when present.

#ifndef NL2FOL_LLM_PROMPT_H_
#define NL2FOL_LLM_PROMPT_H_

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "nl2fol/util/error.h"

namespace nl2fol::llm {

class TemplateError : public Error {
 public:
  using Error::Error;
};

class UnboundPlaceholder : public TemplateError {
 public:
  UnboundPlaceholder(std::string template_id, std::string placeholder);
  const std::string& placeholder() const { return placeholder_; }

 private:
  std::string placeholder_;
};

using Bindings = std::map<std::string, std::string>;

// The template ids the pipeline uses.
const std::vector<std::string>& TemplateIds();

class PromptTemplate {
 public:
  // Throws TemplateError on malformed markup.
  PromptTemplate(std::string id, std::string text);

  const std::string& id() const { return id_; }
  const std::string& text() const { return text_; }
  const std::set<std::string>& required() const { return required_; }
  const std::set<std::string>& optional() const { return optional_; }

  // Throws UnboundPlaceholder if a required placeholder is missing.
  std::string Render(const Bindings& bindings) const;

 private:
  std::string id_;
  std::string text_;
  std::set<std::string> required_;
  std::set<std::string> optional_;
};

class PromptLibrary {
 public:
  // Loads every id in TemplateIds() from `dir`. Throws ConfigError if a
  // template is missing.
  static PromptLibrary Load(const std::string& dir);
  // Directory baked in at build time.
  static std::string DefaultDirectory();

  void Add(PromptTemplate t, std::string few_shot = "");
  const PromptTemplate& Get(std::string_view id) const;
  const std::string& FewShot(std::string_view id) const;
  bool Has(std::string_view id) const;

  // Binds {{few_shot}} automatically, then renders.
  std::string Render(std::string_view id, const Bindings& bindings) const;

 private:
  std::map<std::string, PromptTemplate, std::less<>> templates_;
  std::map<std::string, std::string, std::less<>> few_shot_;
};

}  // namespace nl2fol::llm

#endif  // NL2FOL_LLM_PROMPT_H_
