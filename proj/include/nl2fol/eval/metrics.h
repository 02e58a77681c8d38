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

// Binary classification metrics with FALLACY as the positive class.

#ifndef NL2FOL_EVAL_METRICS_H_
#define NL2FOL_EVAL_METRICS_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "nl2fol/eval/dataset.h"
#include "nl2fol/pipeline/types.h"

namespace nl2fol::eval {

// What an Inconclusive prediction counts as.
enum class UnknownAs { kFallacy, kValid, kDrop };
std::string_view UnknownAsName(UnknownAs u);
UnknownAs ParseUnknownAs(std::string_view s);  // throws ConfigError

using Predicted = pipeline::Classification::Label;

struct ExampleRecord {
  std::string id;
  std::string source;
  GoldLabel gold = GoldLabel::kFallacy;
  Predicted predicted = Predicted::kInconclusive;
  std::string reason;  // inconclusive reason, empty otherwise
  std::string stage;   // failed stage, if any
  std::optional<GoldLabel> counted_as;  // after the unknown-as policy; empty if dropped
  std::string trace;   // trace file relative to the report, if written

  friend bool operator==(const ExampleRecord&, const ExampleRecord&) = default;
};

struct Confusion {
  int tp = 0;
  int fp = 0;
  int tn = 0;
  int fn = 0;
  int inconclusive = 0;  // predictions that were Inconclusive
  int dropped = 0;       // inconclusive predictions left out

  int counted() const { return tp + fp + tn + fn; }
  friend bool operator==(const Confusion&, const Confusion&) = default;
};

// Each value is empty when its denominator is zero.
struct Metrics {
  std::optional<double> accuracy;
  std::optional<double> precision;
  std::optional<double> recall;
  std::optional<double> f1;

  friend bool operator==(const Metrics&, const Metrics&) = default;
};

Metrics ComputeMetrics(const Confusion& c);

// Applies `policy` to one prediction. Empty means dropped.
std::optional<GoldLabel> CountAs(Predicted p, UnknownAs policy);

// Fills counted_as on every record and returns the tallies.
Confusion Tally(std::vector<ExampleRecord>& records, UnknownAs policy);

struct MetricsReport {
  std::string name;     // "nl2fol" or "baseline:end_to_end"
  std::string dataset;  // file name only
  UnknownAs unknown_as = UnknownAs::kFallacy;
  std::optional<uint64_t> seed;  // set when the dataset was sampled
  Confusion confusion;
  Metrics metrics;
  std::vector<ExampleRecord> records;
  nlohmann::json config = nlohmann::json::object();

  friend bool operator==(const MetricsReport&, const MetricsReport&);
};

// Rebuilds confusion and metrics from records under `policy`.
MetricsReport MakeReport(std::string name, std::vector<ExampleRecord> records,
                         UnknownAs policy);

nlohmann::json ToJson(const MetricsReport& r);
MetricsReport ReportFromJson(const nlohmann::json& j);  // throws Error

// Human-readable table. With `baseline`, adds its column and a delta
// column (this report minus baseline).
std::string RenderTable(const MetricsReport& r,
                        const MetricsReport* baseline = nullptr);

// Writes <dir>/report.json and <dir>/report.txt. Throws IoError.
void WriteReport(const MetricsReport& r, const std::string& dir,
                 const MetricsReport* baseline = nullptr);

}  // namespace nl2fol::eval

#endif  // NL2FOL_EVAL_METRICS_H_
