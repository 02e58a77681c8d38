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

// Intermediate records produced by the translation stages.

#ifndef NL2FOL_PIPELINE_TYPES_H_
#define NL2FOL_PIPELINE_TYPES_H_

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nl2fol/fol/ast.h"
#include "nl2fol/llm/gateway.h"
#include "nl2fol/util/error.h"

namespace nl2fol::pipeline {

// A translation stage could not produce usable output.
class StageFailure : public Error {
 public:
  StageFailure(std::string stage, const std::string& detail);
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

struct ClaimImplication {
  std::vector<std::string> claims;
  std::string implication;

  bool no_claim() const { return claims.empty(); }
  friend bool operator==(const ClaimImplication&,
                         const ClaimImplication&) = default;
};

// Quantified when the extractor assigned a variable symbol; constant when
// only the bare phrase was given (the symbol is then derived from it).
enum class EntityKind { kQuantified, kConstant };
std::string_view EntityKindName(EntityKind k);

struct ReferringExpression {
  std::string text;
  std::string symbol;
  EntityKind kind = EntityKind::kQuantified;

  friend bool operator==(const ReferringExpression&,
                         const ReferringExpression&) = default;
};

enum class RelationKind { kEqual, kSubsetLR, kSubsetRL, kUnrelated };
std::string_view RelationKindName(RelationKind k);  // EQUAL, SUBSET_LR, ...

struct EntityRelation {
  std::string left;   // symbols
  std::string right;
  RelationKind relation = RelationKind::kUnrelated;
  bool short_circuit = false;
  std::string raw;
  std::string warning;
};

enum class AtomSource { kClaim, kImplication };
std::string_view AtomSourceName(AtomSource s);

struct PropertyAtom {
  std::string predicate;
  std::vector<std::string> args;  // entity symbols
  AtomSource source = AtomSource::kClaim;

  fol::Formula ToFormula() const;
  std::string ToString() const;  // "Love(x, c)"
  friend bool operator==(const PropertyAtom& a, const PropertyAtom& b) {
    return a.predicate == b.predicate && a.args == b.args;
  }
};

struct BackgroundFact {
  PropertyAtom antecedent;
  PropertyAtom consequent;
  llm::NliJudgment judgment;
  fol::Formula realized = fol::Formula::Atom("_");  // universal conjunct
};

// Per-sentence translation: the properties extracted for it and its formula.
struct SentenceForm {
  std::string sentence;
  AtomSource source = AtomSource::kClaim;
  std::vector<PropertyAtom> properties;
  std::string response;  // last Logical Form answer
  int attempts = 0;
  std::optional<fol::Formula> formula;
};

enum class InconclusiveReason { kUnknown, kTimeout, kSolverError, kStageFailure };
std::string_view InconclusiveReasonName(InconclusiveReason r);

struct Classification {
  enum class Label { kFallacy, kValid, kInconclusive };

  Label label = Label::kInconclusive;
  std::optional<InconclusiveReason> reason;  // set iff Inconclusive
  std::string failed_stage;                  // for kStageFailure
  std::string detail;

  static Classification Fallacy() { return {Label::kFallacy, {}, {}, {}}; }
  static Classification Valid() { return {Label::kValid, {}, {}, {}}; }
  static Classification Inconclusive(InconclusiveReason r, std::string stage,
                                     std::string detail) {
    return {Label::kInconclusive, r, std::move(stage), std::move(detail)};
  }
};
std::string_view LabelName(Classification::Label l);  // FALLACY, VALID, ...

}  // namespace nl2fol::pipeline

#endif  // NL2FOL_PIPELINE_TYPES_H_
