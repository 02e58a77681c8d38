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

#include "nl2fol/eval/dataset.h"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

namespace nl2fol::eval {
namespace {

using nlohmann::json;

std::string Lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string Trim(std::string_view s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

void CheckUnique(const std::vector<LabeledExample>& examples,
                 const std::vector<int>& lines) {
  std::set<std::string> seen;
  for (size_t i = 0; i < examples.size(); ++i) {
    if (!seen.insert(examples[i].id).second) {
      throw FormatError(lines[i], "duplicate id " + examples[i].id);
    }
  }
}

std::string StringField(const json& row, const char* key, int line) {
  if (!row.contains(key) || row[key].is_null()) return "";
  if (row[key].is_string()) return row[key].get<std::string>();
  if (row[key].is_number()) return row[key].dump();
  throw FormatError(line, std::string("field ") + key + " is not a string");
}

}  // namespace

std::string_view GoldLabelName(GoldLabel l) {
  return l == GoldLabel::kFallacy ? "FALLACY" : "VALID";
}

GoldLabel ParseGoldLabel(std::string_view s) {
  std::string l = Lower(Trim(s));
  if (l == "fallacy" || l == "logical fallacy" || l == "lf") return GoldLabel::kFallacy;
  if (l == "valid" || l == "v") return GoldLabel::kValid;
  throw Error("unknown label \"" + std::string(s) + "\"");
}

FormatError::FormatError(int line, const std::string& detail)
    : Error("line " + std::to_string(line) + ": " + detail), line_(line) {}

MissingColumn::MissingColumn(std::string column)
    : Error("missing column \"" + column + "\""), column_(std::move(column)) {}

DatasetFormat ParseDatasetFormat(std::string_view s) {
  if (s == "auto") return DatasetFormat::kAuto;
  if (s == "jsonl") return DatasetFormat::kJsonl;
  if (s == "csv") return DatasetFormat::kCsv;
  if (s == "snli") return DatasetFormat::kSnli;
  throw ConfigError("unknown dataset format \"" + std::string(s) +
                    "\" (expected auto, jsonl, csv or snli)");
}

std::string CombinePremiseHypothesis(std::string_view premise,
                                     std::string_view hypothesis,
                                     std::string_view connective) {
  std::string h = Trim(hypothesis);
  if (!h.empty() && std::isupper(static_cast<unsigned char>(h[0]))) {
    bool keep = h.size() > 1 && std::isupper(static_cast<unsigned char>(h[1]));
    keep |= h[0] == 'I' && (h.size() == 1 || !std::isalpha(static_cast<unsigned char>(h[1])));
    if (!keep) h[0] = static_cast<char>(std::tolower(static_cast<unsigned char>(h[0])));
  }
  return Trim(premise) + " " + std::string(connective) + " " + h;
}

std::vector<LabeledExample> ParseJsonl(std::string_view content,
                                       const LoadOptions& options) {
  std::vector<LabeledExample> out;
  std::vector<int> lines;
  std::istringstream in{std::string(content)};
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (Trim(raw).empty()) continue;
    json row;
    try {
      row = json::parse(raw);
    } catch (const json::parse_error& e) {
      throw FormatError(line, e.what());
    }
    if (!row.is_object()) throw FormatError(line, "row is not an object");
    LabeledExample ex;
    ex.text = Trim(StringField(row, "text", line));
    if (ex.text.empty()) throw FormatError(line, "missing or empty text");
    ex.id = StringField(row, "id", line);
    if (ex.id.empty()) ex.id = std::to_string(line);
    std::string label = StringField(row, "label", line);
    try {
      ex.label = label.empty() ? GoldLabel::kFallacy : ParseGoldLabel(label);
    } catch (const Error& e) {
      throw FormatError(line, e.what());
    }
    ex.source = StringField(row, "source", line);
    if (ex.source.empty()) {
      ex.source = options.default_source.empty() ? "custom" : options.default_source;
    }
    out.push_back(std::move(ex));
    lines.push_back(line);
  }
  CheckUnique(out, lines);
  return out;
}

std::vector<CsvRow> ParseCsvRows(std::string_view content) {
  std::vector<CsvRow> rows;
  CsvRow row;
  std::string field;
  bool quoted = false;
  bool field_started = false;
  int line = 1;
  row.line = 1;
  auto end_field = [&] {
    row.fields.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  auto end_row = [&] {
    end_field();
    bool blank = row.fields.size() == 1 && row.fields[0].empty();
    if (!blank) rows.push_back(std::move(row));
    row = CsvRow{};
    row.line = line;
  };
  for (size_t i = 0; i < content.size(); ++i) {
    char c = content[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < content.size() && content[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        if (c == '\n') ++line;
        field += c;
      }
      continue;
    }
    if (c == '"' && !field_started) {
      quoted = true;
      field_started = true;
    } else if (c == ',') {
      end_field();
    } else if (c == '\r') {
      // tolerated before \n
    } else if (c == '\n') {
      ++line;
      end_row();
    } else {
      field += c;
      field_started = true;
    }
  }
  if (quoted) throw FormatError(row.line, "unterminated quoted field");
  if (field_started || !row.fields.empty()) end_row();
  return rows;
}

std::vector<LabeledExample> ParseCsv(std::string_view content,
                                     const LoadOptions& options) {
  std::vector<CsvRow> rows = ParseCsvRows(content);
  if (rows.empty()) throw MissingColumn(options.text_column);
  const std::vector<std::string>& header = rows[0].fields;
  auto column = [&](const std::string& name) -> int {
    for (size_t i = 0; i < header.size(); ++i) {
      if (Lower(Trim(header[i])) == Lower(name)) return static_cast<int>(i);
    }
    return -1;
  };
  const int text_col = column(options.text_column);
  if (text_col < 0) throw MissingColumn(options.text_column);
  const int id_col = column("id");
  const int label_col = column("label");
  const int source_col = column("source");
  std::vector<LabeledExample> out;
  std::vector<int> lines;
  for (size_t r = 1; r < rows.size(); ++r) {
    const CsvRow& row = rows[r];
    if (row.fields.size() != header.size()) {
      throw FormatError(row.line, "expected " + std::to_string(header.size()) +
                                      " fields, found " +
                                      std::to_string(row.fields.size()));
    }
    auto get = [&](int col) { return col < 0 ? std::string() : Trim(row.fields[col]); };
    LabeledExample ex;
    ex.text = get(text_col);
    if (ex.text.empty()) throw FormatError(row.line, "empty text");
    ex.id = get(id_col);
    if (ex.id.empty()) ex.id = std::to_string(row.line);
    std::string label = get(label_col);
    try {
      ex.label = label.empty() ? GoldLabel::kFallacy : ParseGoldLabel(label);
    } catch (const Error& e) {
      throw FormatError(row.line, e.what());
    }
    ex.source = get(source_col);
    if (ex.source.empty()) {
      ex.source = options.default_source.empty() ? "custom" : options.default_source;
    }
    out.push_back(std::move(ex));
    lines.push_back(row.line);
  }
  CheckUnique(out, lines);
  return out;
}

std::vector<LabeledExample> ParseSnli(std::string_view content,
                                      const LoadOptions& options) {
  std::vector<LabeledExample> out;
  std::vector<int> lines;
  std::istringstream in{std::string(content)};
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (Trim(raw).empty()) continue;
    json row;
    try {
      row = json::parse(raw);
    } catch (const json::parse_error& e) {
      throw FormatError(line, e.what());
    }
    for (const char* key : {"sentence1", "sentence2", "gold_label"}) {
      if (!row.contains(key)) throw MissingColumn(key);
    }
    if (Lower(StringField(row, "gold_label", line)) != "entailment") continue;
    LabeledExample ex;
    ex.text = CombinePremiseHypothesis(StringField(row, "sentence1", line),
                                       StringField(row, "sentence2", line),
                                       options.connective);
    ex.label = GoldLabel::kValid;
    ex.id = StringField(row, "pairID", line);
    if (ex.id.empty()) ex.id = StringField(row, "id", line);
    if (ex.id.empty()) ex.id = std::to_string(line);
    ex.source = "snli";
    out.push_back(std::move(ex));
    lines.push_back(line);
  }
  CheckUnique(out, lines);
  return out;
}

std::vector<LabeledExample> LoadDataset(const std::string& path,
                                        const LoadOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read dataset " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string content = buf.str();
  DatasetFormat format = options.format;
  if (format == DatasetFormat::kAuto) {
    std::string lower = Lower(path);
    auto ends_with = [&](std::string_view suffix) {
      return lower.size() >= suffix.size() &&
             lower.compare(lower.size() - suffix.size(), suffix.size(), suffix) == 0;
    };
    if (ends_with(".csv")) {
      format = DatasetFormat::kCsv;
    } else if (content.find("\"sentence1\"") != std::string::npos) {
      format = DatasetFormat::kSnli;
    } else {
      format = DatasetFormat::kJsonl;
    }
  }
  switch (format) {
    case DatasetFormat::kCsv:
      return ParseCsv(content, options);
    case DatasetFormat::kSnli:
      return ParseSnli(content, options);
    default:
      return ParseJsonl(content, options);
  }
}

std::vector<LabeledExample> BalancedSample(const std::vector<LabeledExample>& all,
                                           size_t per_class, uint64_t seed) {
  std::vector<LabeledExample> fallacies;
  std::vector<LabeledExample> valids;
  for (const LabeledExample& e : all) {
    (e.label == GoldLabel::kFallacy ? fallacies : valids).push_back(e);
  }
  // Fisher-Yates over raw mt19937_64 output, so the order is the same on
  // every standard library.
  std::mt19937_64 rng(seed);
  auto shuffle = [&](std::vector<LabeledExample>& v) {
    for (size_t i = v.size(); i > 1; --i) {
      size_t j = static_cast<size_t>(rng() % i);
      std::swap(v[i - 1], v[j]);
    }
  };
  shuffle(fallacies);
  shuffle(valids);
  size_t n = std::min(fallacies.size(), valids.size());
  if (per_class > 0) n = std::min(n, per_class);
  std::vector<LabeledExample> out(fallacies.begin(), fallacies.begin() + n);
  out.insert(out.end(), valids.begin(), valids.begin() + n);
  shuffle(out);
  return out;
}

}  // namespace nl2fol::eval
