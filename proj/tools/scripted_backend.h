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

// An LlmBackend answering from a hand-written per-example script, used to
// record the corpus fixtures without network access.
//
// Script shape (all answers are the literal completion text):
//
//   {
//     "claim_implication": "...",
//     "entities": "...",
//     "relations": {"man|people": "Answer: 2"},        default "Answer: 4"
//     "properties": {"<sentence>": "Properties: ..."},
//     "entailments": [["Like(people, cheese)", "Love(man, cheese)"]],
//                                          others get NOT_ENTAILMENT
//     "fol": {"<sentence>": "Logical Form: ..."},
//     "interpret": "...",                   optional; a stock answer otherwise
//     "baseline": "Logical Fallacy"         end-to-end prompt answer
//   }

#ifndef NL2FOL_TOOLS_SCRIPTED_BACKEND_H_
#define NL2FOL_TOOLS_SCRIPTED_BACKEND_H_

#include <nlohmann/json.hpp>

#include "nl2fol/llm/gateway.h"

namespace nl2fol::tools {

class ScriptedBackend : public llm::LlmBackend {
 public:
  explicit ScriptedBackend(nlohmann::json script);
  // Throws Error when the script has no answer for the request.
  llm::CompletionResponse Complete(const llm::CompletionRequest& request) override;

 private:
  std::string Answer(const llm::CompletionRequest& request) const;

  nlohmann::json script_;
};

}  // namespace nl2fol::tools

#endif  // NL2FOL_TOOLS_SCRIPTED_BACKEND_H_
