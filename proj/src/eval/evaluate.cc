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

#include "nl2fol/eval/evaluate.h"

#include <algorithm>
#include <atomic>
#include <exception>
#include <filesystem>
#include <mutex>
#include <thread>

#include "nl2fol/pipeline/trace.h"

namespace nl2fol::eval {
namespace {

ExampleRecord RecordFor(const LabeledExample& ex,
                        const pipeline::Classification& c) {
  ExampleRecord r;
  r.id = ex.id;
  r.source = ex.source;
  r.gold = ex.label;
  r.predicted = c.label;
  if (c.reason) r.reason = std::string(pipeline::InconclusiveReasonName(*c.reason));
  r.stage = c.failed_stage;
  return r;
}

MetricsReport Finish(std::string name, std::vector<ExampleRecord> records,
                     const EvalOptions& options, nlohmann::json config) {
  MetricsReport report = MakeReport(std::move(name), std::move(records),
                                    options.unknown_as);
  report.dataset = options.dataset_name;
  report.seed = options.seed;
  config["unknown_as"] = UnknownAsName(options.unknown_as);
  report.config = std::move(config);
  return report;
}

}  // namespace

void ParallelFor(size_t n, int workers, const std::function<void(size_t)>& task) {
  std::atomic<size_t> next{0};
  std::atomic<bool> stop{false};
  std::exception_ptr first;
  std::mutex mu;
  auto work = [&] {
    for (;;) {
      if (stop.load()) return;
      size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        task(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (!first) first = std::current_exception();
        stop = true;
      }
    }
  };
  size_t count = std::min<size_t>(std::max(workers, 1), std::max<size_t>(n, 1));
  std::vector<std::thread> threads;
  for (size_t t = 1; t < count; ++t) threads.emplace_back(work);
  work();
  for (std::thread& t : threads) t.join();
  if (first) std::rethrow_exception(first);
}

MetricsReport Evaluate(const std::vector<LabeledExample>& dataset,
                       pipeline::Pipeline& pipeline, const EvalOptions& options) {
  if (dataset.empty()) throw ConfigError("dataset is empty");
  namespace fs = std::filesystem;
  std::vector<ExampleRecord> records(dataset.size());
  const std::string trace_prefix =
      options.trace_dir.empty()
          ? ""
          : fs::path(options.trace_dir).lexically_normal().filename().string();
  ParallelFor(dataset.size(), options.parallelism, [&](size_t i) {
    const LabeledExample& ex = dataset[i];
    pipeline::PipelineTrace trace = pipeline.Classify(ex.text);
    ExampleRecord r = RecordFor(ex, trace.classification);
    if (!options.trace_dir.empty()) {
      std::string path = pipeline::WriteTrace(pipeline::ToJson(trace), options.trace_dir);
      r.trace = (fs::path(trace_prefix) / fs::path(path).filename()).generic_string();
    }
    r.counted_as = CountAs(r.predicted, options.unknown_as);
    if (options.on_record) options.on_record(r);
    records[i] = std::move(r);
  });
  return Finish("nl2fol", std::move(records), options, pipeline.ConfigSnapshot());
}

MetricsReport EvaluateBaseline(const std::vector<LabeledExample>& dataset,
                               llm::Gateway& gateway, const EvalOptions& options) {
  if (dataset.empty()) throw ConfigError("dataset is empty");
  std::vector<ExampleRecord> records(dataset.size());
  ParallelFor(dataset.size(), options.parallelism, [&](size_t i) {
    ExampleRecord r = RecordFor(dataset[i], pipeline::BaselineClassify(gateway, dataset[i].text));
    r.counted_as = CountAs(r.predicted, options.unknown_as);
    if (options.on_record) options.on_record(r);
    records[i] = std::move(r);
  });
  const llm::GatewayConfig& g = gateway.config();
  nlohmann::json config = {{"mode", llm::ModeName(g.mode)},
                           {"model", g.model},
                           {"temperature", g.temperature},
                           {"max_tokens", g.max_tokens},
                           {"prompt", "end_to_end"}};
  return Finish("baseline:end_to_end", std::move(records), options, std::move(config));
}

}  // namespace nl2fol::eval
