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

#include "tools/scripted_backend.h"

namespace nl2fol::tools {

using nlohmann::json;

ScriptedBackend::ScriptedBackend(json script) : script_(std::move(script)) {}

llm::CompletionResponse ScriptedBackend::Complete(
    const llm::CompletionRequest& request) {
  llm::CompletionResponse r;
  r.text = Answer(request);
  r.prompt_tokens = static_cast<int>(request.prompt.size() / 4);
  r.completion_tokens = static_cast<int>(r.text.size() / 4);
  return r;
}

std::string ScriptedBackend::Answer(const llm::CompletionRequest& request) const {
  const std::string& id = request.template_id;
  auto binding = [&](const std::string& name) -> std::string {
    auto it = request.bindings.find(name);
    return it == request.bindings.end() ? "" : it->second;
  };
  auto lookup = [&](const char* section, const std::string& key) -> std::string {
    if (script_.contains(section) && script_[section].contains(key)) {
      return script_[section][key].get<std::string>();
    }
    throw Error(std::string("script has no ") + section + " answer for \"" + key +
                "\"");
  };
  if (id == "claim_implication" || id == "entities") {
    if (!script_.contains(id)) throw Error("script has no " + id + " answer");
    return script_[id].get<std::string>();
  }
  if (id == "entity_relation") {
    std::string key = binding("entity_a") + "|" + binding("entity_b");
    if (script_.contains("relations") && script_["relations"].contains(key)) {
      return script_["relations"][key].get<std::string>();
    }
    return "Answer: 4";
  }
  if (id == "properties") return lookup("properties", binding("sentence"));
  if (id == "fol_formulation") return lookup("fol", binding("sentence"));
  if (id == "nli_relation") {
    if (script_.contains("entailments")) {
      for (const json& pair : script_["entailments"]) {
        if (pair.at(0) == binding("premise") && pair.at(1) == binding("hypothesis")) {
          return "Answer: ENTAILMENT";
        }
      }
    }
    return "Answer: NOT_ENTAILMENT";
  }
  if (id == "interpret") {
    if (script_.contains("interpret")) return script_["interpret"].get<std::string>();
    return "The counterexample makes every premise true while \"" +
           binding("implication") +
           "\" is false, so the implication does not follow from the claims.";
  }
  if (id == "end_to_end") {
    if (!script_.contains("baseline")) throw Error("script has no baseline answer");
    return "Answer: " + script_["baseline"].get<std::string>();
  }
  throw Error("script cannot answer template " + id);
}

}  // namespace nl2fol::tools
