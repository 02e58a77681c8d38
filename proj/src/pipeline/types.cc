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

#include "nl2fol/pipeline/types.h"

namespace nl2fol::pipeline {

StageFailure::StageFailure(std::string stage, const std::string& detail)
    : Error("stage " + stage + " failed: " + detail), stage_(std::move(stage)) {}

std::string_view EntityKindName(EntityKind k) {
  return k == EntityKind::kQuantified ? "quantified" : "constant";
}

std::string_view RelationKindName(RelationKind k) {
  switch (k) {
    case RelationKind::kEqual:
      return "EQUAL";
    case RelationKind::kSubsetLR:
      return "SUBSET_LR";
    case RelationKind::kSubsetRL:
      return "SUBSET_RL";
    case RelationKind::kUnrelated:
      break;
  }
  return "UNRELATED";
}

std::string_view AtomSourceName(AtomSource s) {
  return s == AtomSource::kClaim ? "claim" : "implication";
}

fol::Formula PropertyAtom::ToFormula() const {
  std::vector<fol::Argument> terms;
  for (const std::string& a : args) terms.emplace_back(fol::Term::Constant(a));
  return fol::Formula::Atom(predicate, std::move(terms));
}

std::string PropertyAtom::ToString() const {
  std::string out = predicate;
  if (args.empty()) return out;
  out += '(';
  for (size_t i = 0; i < args.size(); ++i) {
    if (i > 0) out += ", ";
    out += args[i];
  }
  out += ')';
  return out;
}

std::string_view InconclusiveReasonName(InconclusiveReason r) {
  switch (r) {
    case InconclusiveReason::kUnknown:
      return "unknown";
    case InconclusiveReason::kTimeout:
      return "timeout";
    case InconclusiveReason::kSolverError:
      return "solver_error";
    case InconclusiveReason::kStageFailure:
      break;
  }
  return "stage_failure";
}

std::string_view LabelName(Classification::Label l) {
  switch (l) {
    case Classification::Label::kFallacy:
      return "FALLACY";
    case Classification::Label::kValid:
      return "VALID";
    case Classification::Label::kInconclusive:
      break;
  }
  return "INCONCLUSIVE";
}

}  // namespace nl2fol::pipeline
