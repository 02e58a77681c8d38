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

// Readers for the line formats the prompt templates ask for. All of them
// are lenient about bullets, quotes and letter case, and none calls an LLM.

#ifndef NL2FOL_PIPELINE_RESPONSES_H_
#define NL2FOL_PIPELINE_RESPONSES_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nl2fol/pipeline/types.h"

namespace nl2fol::pipeline {

// "Claim: ..." and "Implication: ..." lines. nullopt without an implication.
// When several implications are given the first one is kept.
std::optional<ClaimImplication> ParseClaimImplicationResponse(
    std::string_view text);

struct EntityMention {
  std::string text;
  std::string symbol;  // empty for a bare phrase
};

// "Referring expressions: man: x, cheese: c, bridge", either inline or as a
// bulleted list below the header. Lines holding subset notation are skipped.
std::vector<EntityMention> ParseReferringExpressions(std::string_view text);

// The 1-4 choice of the entity relation prompt, or nullopt.
std::optional<int> ParseRelationChoice(std::string_view text);

// Atom list after "Properties:" (or the whole text). Throws fol::SyntaxError.
std::vector<fol::Formula> ParsePropertiesResponse(std::string_view text);

// Formula text after the last "Logical Form:" marker, joined onto one line,
// with Unicode connectives mapped to their ASCII spellings.
std::string ExtractLogicalForm(std::string_view text);

// "Logical Fallacy" / "Valid" answer of the end-to-end prompt.
std::optional<Classification::Label> ParseEndToEndAnswer(std::string_view text);

// Identifier derived from a phrase: "red bridge" -> "redBridge".
std::string SymbolFromPhrase(std::string_view phrase);

}  // namespace nl2fol::pipeline

#endif  // NL2FOL_PIPELINE_RESPONSES_H_
