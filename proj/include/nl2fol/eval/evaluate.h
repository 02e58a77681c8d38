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

// Batch classification over a dataset.

#ifndef NL2FOL_EVAL_EVALUATE_H_
#define NL2FOL_EVAL_EVALUATE_H_

#include <functional>
#include <string>
#include <vector>

#include "nl2fol/eval/dataset.h"
#include "nl2fol/eval/metrics.h"
#include "nl2fol/llm/gateway.h"
#include "nl2fol/pipeline/pipeline.h"

namespace nl2fol::eval {

struct EvalOptions {
  UnknownAs unknown_as = UnknownAs::kFallacy;
  int parallelism = 4;        // worker threads, at least 1
  std::string trace_dir;      // write one trace per example when set
  std::string dataset_name;   // recorded in the report
  std::optional<uint64_t> seed;
  // Called after each example, from the worker that ran it.
  std::function<void(const ExampleRecord&)> on_record;
};

// Runs the pipeline on every example. Only ConfigError aborts the run;
// any other failure is an Inconclusive record. Record order follows the
// dataset. Trace paths are stored relative to the trace directory's parent.
MetricsReport Evaluate(const std::vector<LabeledExample>& dataset,
                       pipeline::Pipeline& pipeline, const EvalOptions& options);

// Same, with the single-prompt end-to-end classifier.
MetricsReport EvaluateBaseline(const std::vector<LabeledExample>& dataset,
                               llm::Gateway& gateway, const EvalOptions& options);

// Calls `task(i)` for i in [0, n) on up to `workers` threads. The first
// exception thrown by any task is rethrown after all workers stop; the
// remaining tasks are skipped.
void ParallelFor(size_t n, int workers, const std::function<void(size_t)>& task);

}  // namespace nl2fol::eval

#endif  // NL2FOL_EVAL_EVALUATE_H_
