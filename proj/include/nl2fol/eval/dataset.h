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

// Labeled fallacy/valid datasets.
//
// Accepted inputs:
//   jsonl  {"id", "text", "label", "source"}; only text is required
//   csv    header row with a text column; id, label, source optional
//   snli   {"sentence1", "sentence2", "gold_label"}; entailment rows become
//          one VALID sentence "<premise> Thus, <hypothesis>", others are
//          skipped
//
// Rows without a label are FALLACY, which is how the fallacy benchmarks
// ship.

#ifndef NL2FOL_EVAL_DATASET_H_
#define NL2FOL_EVAL_DATASET_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "nl2fol/util/error.h"

namespace nl2fol::eval {

enum class GoldLabel { kFallacy, kValid };
std::string_view GoldLabelName(GoldLabel l);  // FALLACY, VALID
GoldLabel ParseGoldLabel(std::string_view s);  // throws Error

struct LabeledExample {
  std::string id;
  std::string text;
  GoldLabel label = GoldLabel::kFallacy;
  std::string source = "custom";  // logic | logicclimate | snli | custom

  friend bool operator==(const LabeledExample&, const LabeledExample&) = default;
};

class FormatError : public Error {
 public:
  FormatError(int line, const std::string& detail);
  int line() const { return line_; }

 private:
  int line_;
};

class MissingColumn : public Error {
 public:
  explicit MissingColumn(std::string column);
  const std::string& column() const { return column_; }

 private:
  std::string column_;
};

enum class DatasetFormat { kAuto, kJsonl, kCsv, kSnli };
DatasetFormat ParseDatasetFormat(std::string_view s);  // throws ConfigError

struct LoadOptions {
  DatasetFormat format = DatasetFormat::kAuto;  // by extension; .jsonl is jsonl
  std::string text_column = "text";             // csv only
  std::string default_source;  // rows without one; empty means "custom". SNLI rows are "snli".
  std::string connective = "Thus,";
};

// Throws IoError, FormatError, MissingColumn. Ids default to "<line>" and
// must be unique.
std::vector<LabeledExample> LoadDataset(const std::string& path,
                                        const LoadOptions& options = {});
std::vector<LabeledExample> ParseJsonl(std::string_view content,
                                       const LoadOptions& options = {});
std::vector<LabeledExample> ParseCsv(std::string_view content,
                                     const LoadOptions& options = {});
std::vector<LabeledExample> ParseSnli(std::string_view content,
                                      const LoadOptions& options = {});

// "<premise> <connective> <hypothesis>", lowering the hypothesis' first
// letter unless it starts an acronym or "I".
std::string CombinePremiseHypothesis(std::string_view premise,
                                     std::string_view hypothesis,
                                     std::string_view connective = "Thus,");

// RFC 4180 records (quoted fields, doubled quotes, embedded newlines).
// Each row carries the 1-based line it starts on.
struct CsvRow {
  int line = 0;
  std::vector<std::string> fields;
};
std::vector<CsvRow> ParseCsvRows(std::string_view content);

// Equal numbers of FALLACY and VALID examples, `per_class` each (0: as many
// as the smaller class has), shuffled with `seed`.
std::vector<LabeledExample> BalancedSample(const std::vector<LabeledExample>& all,
                                           size_t per_class, uint64_t seed);

}  // namespace nl2fol::eval

#endif  // NL2FOL_EVAL_DATASET_H_
