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

#include "nl2fol/eval/metrics.h"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>

namespace nl2fol::eval {
namespace {

using nlohmann::json;

std::optional<double> Ratio(int num, int den) {
  if (den == 0) return std::nullopt;
  return static_cast<double>(num) / den;
}

json Opt(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::optional<double> OptFrom(const json& j, const char* key) {
  if (!j.contains(key) || j[key].is_null()) return std::nullopt;
  return j[key].get<double>();
}

Predicted ParsePredicted(const std::string& s) {
  if (s == "FALLACY") return Predicted::kFallacy;
  if (s == "VALID") return Predicted::kValid;
  if (s == "INCONCLUSIVE") return Predicted::kInconclusive;
  throw Error("unknown prediction " + s);
}

std::string Cell(const std::optional<double>& v) {
  if (!v) return "n/a";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", *v);
  return buf;
}

std::string Delta(const std::optional<double>& a, const std::optional<double>& b) {
  if (!a || !b) return "n/a";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%+.3f", *a - *b);
  return buf;
}

std::string Pad(const std::string& s, size_t width) {
  return s.size() >= width ? s + " " : s + std::string(width - s.size(), ' ');
}

std::string Counts(const Confusion& c) {
  return std::to_string(c.tp) + "/" + std::to_string(c.fp) + "/" +
         std::to_string(c.tn) + "/" + std::to_string(c.fn);
}

}  // namespace

std::string_view UnknownAsName(UnknownAs u) {
  switch (u) {
    case UnknownAs::kFallacy:
      return "fallacy";
    case UnknownAs::kValid:
      return "valid";
    case UnknownAs::kDrop:
      return "drop";
  }
  return "fallacy";
}

UnknownAs ParseUnknownAs(std::string_view s) {
  if (s == "fallacy") return UnknownAs::kFallacy;
  if (s == "valid") return UnknownAs::kValid;
  if (s == "drop") return UnknownAs::kDrop;
  throw ConfigError("unknown-as must be fallacy, valid or drop, not \"" +
                    std::string(s) + "\"");
}

Metrics ComputeMetrics(const Confusion& c) {
  Metrics m;
  m.accuracy = Ratio(c.tp + c.tn, c.counted());
  m.precision = Ratio(c.tp, c.tp + c.fp);
  m.recall = Ratio(c.tp, c.tp + c.fn);
  // 2TP / (2TP + FP + FN) is the harmonic mean of precision and recall
  // whenever both exist, and avoids a second rounding step.
  if (m.precision && m.recall) m.f1 = Ratio(2 * c.tp, 2 * c.tp + c.fp + c.fn);
  return m;
}

std::optional<GoldLabel> CountAs(Predicted p, UnknownAs policy) {
  switch (p) {
    case Predicted::kFallacy:
      return GoldLabel::kFallacy;
    case Predicted::kValid:
      return GoldLabel::kValid;
    case Predicted::kInconclusive:
      break;
  }
  switch (policy) {
    case UnknownAs::kFallacy:
      return GoldLabel::kFallacy;
    case UnknownAs::kValid:
      return GoldLabel::kValid;
    case UnknownAs::kDrop:
      break;
  }
  return std::nullopt;
}

Confusion Tally(std::vector<ExampleRecord>& records, UnknownAs policy) {
  Confusion c;
  for (ExampleRecord& r : records) {
    if (r.predicted == Predicted::kInconclusive) ++c.inconclusive;
    r.counted_as = CountAs(r.predicted, policy);
    if (!r.counted_as) {
      ++c.dropped;
      continue;
    }
    const bool gold_pos = r.gold == GoldLabel::kFallacy;
    const bool pred_pos = *r.counted_as == GoldLabel::kFallacy;
    if (gold_pos && pred_pos) ++c.tp;
    if (!gold_pos && pred_pos) ++c.fp;
    if (!gold_pos && !pred_pos) ++c.tn;
    if (gold_pos && !pred_pos) ++c.fn;
  }
  return c;
}

bool operator==(const MetricsReport& a, const MetricsReport& b) {
  return a.name == b.name && a.dataset == b.dataset && a.unknown_as == b.unknown_as &&
         a.seed == b.seed && a.confusion == b.confusion && a.metrics == b.metrics &&
         a.records == b.records && a.config == b.config;
}

MetricsReport MakeReport(std::string name, std::vector<ExampleRecord> records,
                         UnknownAs policy) {
  MetricsReport r;
  r.name = std::move(name);
  r.unknown_as = policy;
  r.records = std::move(records);
  r.confusion = Tally(r.records, policy);
  r.metrics = ComputeMetrics(r.confusion);
  return r;
}

json ToJson(const MetricsReport& r) {
  json records = json::array();
  for (const ExampleRecord& e : r.records) {
    json j = {{"id", e.id},
              {"source", e.source},
              {"gold", GoldLabelName(e.gold)},
              {"predicted", pipeline::LabelName(e.predicted)},
              {"counted_as", e.counted_as ? json(GoldLabelName(*e.counted_as))
                                          : json(nullptr)}};
    if (!e.reason.empty()) j["reason"] = e.reason;
    if (!e.stage.empty()) j["stage"] = e.stage;
    if (!e.trace.empty()) j["trace"] = e.trace;
    records.push_back(std::move(j));
  }
  const Confusion& c = r.confusion;
  return {{"report_version", 1},
          {"name", r.name},
          {"dataset", r.dataset},
          {"unknown_as", UnknownAsName(r.unknown_as)},
          {"seed", r.seed ? json(*r.seed) : json(nullptr)},
          {"counts",
           {{"tp", c.tp},
            {"fp", c.fp},
            {"tn", c.tn},
            {"fn", c.fn},
            {"inconclusive", c.inconclusive},
            {"dropped", c.dropped},
            {"total", static_cast<int>(r.records.size())}}},
          {"metrics",
           {{"accuracy", Opt(r.metrics.accuracy)},
            {"precision", Opt(r.metrics.precision)},
            {"recall", Opt(r.metrics.recall)},
            {"f1", Opt(r.metrics.f1)}}},
          {"config", r.config},
          {"records", records}};
}

MetricsReport ReportFromJson(const json& j) {
  try {
    MetricsReport r;
    r.name = j.at("name").get<std::string>();
    r.dataset = j.at("dataset").get<std::string>();
    r.unknown_as = ParseUnknownAs(j.at("unknown_as").get<std::string>());
    if (j.contains("seed") && !j["seed"].is_null()) r.seed = j["seed"].get<uint64_t>();
    const json& c = j.at("counts");
    r.confusion = {c.at("tp").get<int>(), c.at("fp").get<int>(),
                   c.at("tn").get<int>(), c.at("fn").get<int>(),
                   c.at("inconclusive").get<int>(), c.at("dropped").get<int>()};
    const json& m = j.at("metrics");
    r.metrics = {OptFrom(m, "accuracy"), OptFrom(m, "precision"),
                 OptFrom(m, "recall"), OptFrom(m, "f1")};
    r.config = j.value("config", json::object());
    for (const json& e : j.at("records")) {
      ExampleRecord rec;
      rec.id = e.at("id").get<std::string>();
      rec.source = e.value("source", "");
      rec.gold = ParseGoldLabel(e.at("gold").get<std::string>());
      rec.predicted = ParsePredicted(e.at("predicted").get<std::string>());
      if (!e.at("counted_as").is_null()) {
        rec.counted_as = ParseGoldLabel(e["counted_as"].get<std::string>());
      }
      rec.reason = e.value("reason", "");
      rec.stage = e.value("stage", "");
      rec.trace = e.value("trace", "");
      r.records.push_back(std::move(rec));
    }
    return r;
  } catch (const json::exception& e) {
    throw Error(std::string("malformed report: ") + e.what());
  }
}

std::string RenderTable(const MetricsReport& r, const MetricsReport* baseline) {
  size_t w = std::max<size_t>(14, r.name.size() + 2);
  if (baseline != nullptr) w = std::max(w, baseline->name.size() + 2);
  std::string out = "Dataset: " + r.dataset + " (" + std::to_string(r.records.size()) +
                    " examples";
  if (r.seed) out += ", seed " + std::to_string(*r.seed);
  out += ")\n";
  out += Pad("", w) + Pad(r.name, w);
  if (baseline != nullptr) out += Pad(baseline->name, w) + "delta";
  out += "\n";
  auto row = [&](const char* label, const std::optional<double> Metrics::*field) {
    out += Pad(label, w) + Pad(Cell(r.metrics.*field), w);
    if (baseline != nullptr) {
      out += Pad(Cell(baseline->metrics.*field), w) +
             Delta(r.metrics.*field, baseline->metrics.*field);
    }
    out += "\n";
  };
  row("Accuracy", &Metrics::accuracy);
  row("Precision", &Metrics::precision);
  row("Recall", &Metrics::recall);
  row("F1", &Metrics::f1);
  out += Pad("TP/FP/TN/FN", w) + Pad(Counts(r.confusion), w);
  if (baseline != nullptr) out += Counts(baseline->confusion);
  out += "\n";
  out += "Inconclusive: " + std::to_string(r.confusion.inconclusive) + " (counted as " +
         std::string(UnknownAsName(r.unknown_as)) + ", dropped " +
         std::to_string(r.confusion.dropped) + ")";
  if (baseline != nullptr) {
    out += "; " + baseline->name + ": " + std::to_string(baseline->confusion.inconclusive);
  }
  out += "\n";
  return out;
}

void WriteReport(const MetricsReport& r, const std::string& dir,
                 const MetricsReport* baseline) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir + ": " + ec.message());
  auto write = [](const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << content;
    if (!out) throw IoError("cannot write " + path.string());
  };
  write(fs::path(dir) / "report.json", ToJson(r).dump(2) + "\n");
  if (baseline != nullptr) {
    write(fs::path(dir) / "baseline_report.json", ToJson(*baseline).dump(2) + "\n");
  }
  write(fs::path(dir) / "report.txt", RenderTable(r, baseline));
}

}  // namespace nl2fol::eval
