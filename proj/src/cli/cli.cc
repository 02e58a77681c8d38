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

#include "nl2fol/cli/cli.h"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>

#include "nl2fol/eval/evaluate.h"
#include "nl2fol/fol/parser.h"
#include "nl2fol/pipeline/trace.h"
#include "nl2fol/smt/compiler.h"

namespace nl2fol::cli {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;
using Label = pipeline::Classification::Label;

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string Trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

int ExitFor(Label l) {
  switch (l) {
    case Label::kValid:
      return kExitValid;
    case Label::kFallacy:
      return kExitFallacy;
    case Label::kInconclusive:
      break;
  }
  return kExitInconclusive;
}

// "line L, column C" for a byte offset, plus the line with a caret under it.
std::string Caret(const std::string& source, size_t offset) {
  offset = std::min(offset, source.size());
  size_t start = 0;
  if (offset > 0) {
    size_t nl = source.rfind('\n', offset - 1);
    if (nl != std::string::npos) start = nl + 1;
  }
  size_t end = source.find('\n', offset);
  if (end == std::string::npos) end = source.size();
  int line = 1 + static_cast<int>(std::count(source.begin(), source.begin() + start, '\n'));
  size_t column = offset - start + 1;
  return "line " + std::to_string(line) + ", column " + std::to_string(column) +
         "\n  " + source.substr(start, end - start) + "\n  " +
         std::string(offset - start, ' ') + "^\n";
}

std::string ClassificationLine(const pipeline::Classification& c) {
  std::string out(pipeline::LabelName(c.label));
  if (c.reason) {
    out += " (" + std::string(pipeline::InconclusiveReasonName(*c.reason));
    if (!c.failed_stage.empty()) out += " at " + c.failed_stage;
    if (!c.detail.empty()) out += ": " + c.detail;
    out += ")";
  }
  return out;
}

std::string Indent(const std::string& block) {
  std::string out;
  std::istringstream in(block);
  std::string line;
  while (std::getline(in, line)) out += "  " + line + "\n";
  return out;
}

// Shared rendering of a trace document for classify and explain.
void PrintTrace(const json& t, bool explanation_only, std::ostream& out) {
  pipeline::Classification c = pipeline::ClassificationFromJson(t.at("classification"));
  out << ClassificationLine(c) << "\n";
  if (!explanation_only && t.contains("claim_implication") &&
      t["claim_implication"].is_object()) {
    for (const json& claim : t["claim_implication"]["claims"]) {
      out << "claim: " << claim.get<std::string>() << "\n";
    }
    out << "implication: " << t["claim_implication"]["implication"].get<std::string>()
        << "\n";
  }
  if (t.contains("fol") && t["fol"].is_string()) {
    out << "formula: " << t["fol"].get<std::string>() << "\n";
  }
  const std::string cex = t.value("counterexample", "");
  if (!cex.empty()) out << "counterexample:\n" << Indent(cex);
  const std::string explanation = t.value("explanation", "");
  if (!explanation.empty()) {
    out << "explanation: " << explanation << "\n";
  } else if (c.label == Label::kFallacy) {
    out << "explanation: (unavailable; see counterexample)\n";
  } else if (explanation_only && c.label == Label::kValid) {
    out << "explanation: the negation of the formula is unsatisfiable, so the "
           "implication follows from the claims\n";
  }
}

struct Globals {
  std::string config_file;
  std::string solver;
  double solver_timeout = 0;
  std::string llm_url, llm_model, llm_key;
  std::string mode;
  bool replay = false, record = false, live = false;
  std::string fixture_dir;
  std::string nli_backend, nli_url;
  std::string unknown_as;
  std::string out_dir;
  int parallelism = 0;
  bool no_interpret = false;
  bool json = false;
};

CliConfig BuildConfig(const Globals& g, CLI::App& app, const EnvLookup& env) {
  CliConfig cfg;
  if (!g.config_file.empty()) ApplyConfigFile(cfg, g.config_file);
  ApplyEnvironment(cfg, env);
  auto given = [&](const char* name) { return app.get_option(name)->count() > 0; };
  if (given("--solver")) cfg.solver.executable = g.solver;
  if (given("--solver-timeout")) cfg.solver.timeout_seconds = g.solver_timeout;
  if (given("--llm-url")) cfg.llm_url = g.llm_url;
  if (given("--llm-model")) cfg.gateway.model = g.llm_model;
  if (given("--llm-key")) cfg.llm_key = g.llm_key;
  if (given("--mode")) cfg.mode = llm::ParseMode(g.mode);
  if (g.replay + g.record + g.live > 1) {
    throw ConfigError("--replay, --record and --live are mutually exclusive");
  }
  if (g.replay) cfg.mode = llm::Mode::kReplay;
  if (g.record) cfg.mode = llm::Mode::kRecord;
  if (g.live) cfg.mode = llm::Mode::kLive;
  if (given("--fixture-dir")) cfg.gateway.fixture_dir = g.fixture_dir;
  if (given("--nli-backend")) cfg.gateway.nli_backend = llm::ParseNliBackend(g.nli_backend);
  if (given("--nli-url")) cfg.nli_url = g.nli_url;
  if (given("--unknown-as")) cfg.unknown_as = eval::ParseUnknownAs(g.unknown_as);
  if (given("--out")) cfg.out_dir = g.out_dir;
  if (given("--parallelism")) cfg.parallelism = g.parallelism;
  if (g.no_interpret) cfg.pipeline.interpret = false;
  if (cfg.parallelism < 1) throw ConfigError("parallelism must be at least 1");
  return cfg;
}

std::string InputText(const std::string& positional, const std::string& file) {
  if (!positional.empty() && !file.empty()) {
    throw ConfigError("give either text or --file, not both");
  }
  std::string text = file.empty() ? positional : ReadFile(file);
  text = Trim(text);
  if (text.empty()) throw ConfigError("no input text");
  return text;
}

int CmdCompile(const std::string& source, const std::string& output, bool as_json,
               std::ostream& out, std::ostream& err) {
  smt::Compilation c = smt::CompileText(source);
  const std::string script = c.script.ToString();
  if (!output.empty()) {
    std::ofstream f(output, std::ios::binary | std::ios::trunc);
    f << script;
    if (!f) throw IoError("cannot write " + output);
  }
  if (as_json) {
    out << json{{"fol", fol::PrettyPrint(c.formula)},
                {"signature", pipeline::ToJson(c.signature)},
                {"smt", script},
                {"warnings", c.warnings}}
               .dump(2)
        << "\n";
  } else if (output.empty()) {
    out << script;
  }
  for (const std::string& w : c.warnings) err << "warning: " << w << "\n";
  return kExitOk;
}

int CmdSolve(const std::string& path, const CliConfig& cfg, bool as_json,
             std::ostream& out, std::ostream& err) {
  solver::SolverConfig s = ResolveSolver(cfg);
  const std::string text = ReadFile(path);
  solver::SolverOutcome o = solver::RunSolverOnText(text, s);
  if (as_json) {
    out << pipeline::ToJson(o).dump(2) << "\n";
  } else {
    std::string verdict(solver::VerdictName(o.verdict));
    std::transform(verdict.begin(), verdict.end(), verdict.begin(),
                   [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
    out << verdict << "\n";
    if (o.model) out << pipeline::RenderCounterexample(*o.model, smt::Signature{});
  }
  switch (o.verdict) {
    case solver::Verdict::kSat:
    case solver::Verdict::kUnsat:
      return kExitOk;
    case solver::Verdict::kUnknown:
    case solver::Verdict::kTimeout:
      return kExitInconclusive;
    case solver::Verdict::kSolverError:
      break;
  }
  err << "nl2fol solve: solver error: " << o.error << "\n";
  return kExitSolverError;
}

int CmdClassify(const std::string& text, const CliConfig& cfg, bool explanation_only,
                bool as_json, std::ostream& out, std::ostream& err) {
  solver::SolverConfig s = ResolveSolver(cfg);
  std::unique_ptr<llm::Gateway> gateway = MakeGateway(cfg);
  pipeline::Pipeline p(*gateway, s, cfg.pipeline);
  pipeline::PipelineTrace trace = p.Classify(text);
  json j = pipeline::ToJson(trace);
  std::string path;
  if (!cfg.out_dir.empty()) {
    path = pipeline::WriteTrace(j, (fs::path(cfg.out_dir) / "traces").string());
  }
  if (as_json) {
    out << j.dump(2) << "\n";
    if (!path.empty()) err << "trace: " << path << "\n";
  } else {
    PrintTrace(j, explanation_only, out);
    for (const std::string& w : trace.warnings) err << "warning: " << w << "\n";
    if (!path.empty()) out << "trace: " << path << "\n";
  }
  return ExitFor(trace.classification.label);
}

int CmdExplainTrace(const std::string& path, bool as_json, std::ostream& out) {
  json t;
  try {
    t = json::parse(ReadFile(path));
  } catch (const json::parse_error& e) {
    throw IoError(path + ": " + e.what());
  }
  if (!t.contains("classification")) throw IoError(path + " is not a trace file");
  if (as_json) {
    out << json{{"classification", t["classification"]},
                {"fol", t.value("fol", json(nullptr))},
                {"counterexample", t.value("counterexample", "")},
                {"explanation", t.value("explanation", "")},
                {"explanation_fallback", t.value("explanation_fallback", false)}}
               .dump(2)
        << "\n";
  } else {
    PrintTrace(t, true, out);
  }
  return ExitFor(pipeline::ClassificationFromJson(t["classification"]).label);
}

int CmdBaseline(const std::string& text, const CliConfig& cfg, bool as_json,
                std::ostream& out) {
  std::unique_ptr<llm::Gateway> gateway = MakeGateway(cfg);
  std::string raw;
  pipeline::Classification c = pipeline::BaselineClassify(*gateway, text, &raw);
  if (as_json) {
    json j = pipeline::ToJson(c);
    j["raw"] = raw;
    out << j.dump(2) << "\n";
  } else {
    out << ClassificationLine(c) << "\n";
  }
  return ExitFor(c.label);
}

struct EvalArgs {
  std::vector<std::string> datasets;
  std::string format = "auto";
  std::string text_column = "text";
  std::string connective = "Thus,";
  std::string source;
  size_t sample = 0;
  uint64_t seed = 20260101;
  std::string baseline;
};

int CmdEval(const EvalArgs& a, const CliConfig& cfg, bool as_json, std::ostream& out,
            std::ostream& err) {
  eval::LoadOptions load;
  load.format = eval::ParseDatasetFormat(a.format);
  load.text_column = a.text_column;
  load.connective = a.connective;
  load.default_source = a.source;
  std::vector<eval::LabeledExample> data;
  std::string names;
  for (const std::string& path : a.datasets) {
    std::vector<eval::LabeledExample> part = eval::LoadDataset(path, load);
    // Ids are only unique within a file.
    if (a.datasets.size() > 1) {
      for (eval::LabeledExample& e : part) e.id = fs::path(path).stem().string() + ":" + e.id;
    }
    data.insert(data.end(), std::make_move_iterator(part.begin()),
                std::make_move_iterator(part.end()));
    names += (names.empty() ? "" : "+") + fs::path(path).filename().string();
  }
  eval::EvalOptions opts;
  opts.unknown_as = cfg.unknown_as;
  opts.parallelism = cfg.parallelism;
  opts.dataset_name = names;
  if (a.sample > 0) {
    data = eval::BalancedSample(data, a.sample, a.seed);
    opts.seed = a.seed;
  }
  if (!a.baseline.empty() && a.baseline != "end_to_end") {
    throw ConfigError("--baseline supports only end_to_end");
  }
  if (!cfg.out_dir.empty()) opts.trace_dir = (fs::path(cfg.out_dir) / "traces").string();

  solver::SolverConfig s = ResolveSolver(cfg);
  std::unique_ptr<llm::Gateway> gateway = MakeGateway(cfg);
  pipeline::Pipeline p(*gateway, s, cfg.pipeline);
  eval::MetricsReport report = eval::Evaluate(data, p, opts);
  std::optional<eval::MetricsReport> baseline;
  if (!a.baseline.empty()) {
    eval::EvalOptions bopts = opts;
    bopts.trace_dir.clear();
    baseline = eval::EvaluateBaseline(data, *gateway, bopts);
  }
  const eval::MetricsReport* base = baseline ? &*baseline : nullptr;
  if (!cfg.out_dir.empty()) {
    eval::WriteReport(report, cfg.out_dir, base);
    err << "report: " << (fs::path(cfg.out_dir) / "report.json").string() << "\n";
  }
  if (as_json) {
    json j = eval::ToJson(report);
    if (base != nullptr) j = {{"report", j}, {"baseline", eval::ToJson(*base)}};
    out << j.dump(2) << "\n";
  } else {
    out << eval::RenderTable(report, base);
  }
  return kExitOk;
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
           const EnvLookup& env) {
  CLI::App app{"Natural-language arguments to first-order logic, checked by an SMT solver"};
  app.name("nl2fol");
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--config", g.config_file, "JSON config file");
  app.add_option("--solver", g.solver, "SMT solver executable (env NL2FOL_SOLVER)");
  app.add_option("--solver-timeout", g.solver_timeout, "Solver timeout in seconds");
  app.add_option("--llm-url", g.llm_url, "Chat-completions base URL (env NL2FOL_LLM_URL)");
  app.add_option("--llm-model", g.llm_model, "Model name (env NL2FOL_LLM_MODEL)");
  app.add_option("--llm-key", g.llm_key, "API key (env NL2FOL_LLM_KEY)");
  app.add_option("--mode", g.mode, "live, record or replay")
      ->check(CLI::IsMember({"live", "record", "replay"}));
  app.add_flag("--replay", g.replay, "Same as --mode replay");
  app.add_flag("--record", g.record, "Same as --mode record");
  app.add_flag("--live", g.live, "Same as --mode live");
  app.add_option("--fixture-dir", g.fixture_dir, "LLM fixture directory (env NL2FOL_FIXTURE_DIR)");
  app.add_option("--nli-backend", g.nli_backend,
                 "llm, llm_with_context or external_classifier")
      ->check(CLI::IsMember({"llm", "llm_with_context", "external_classifier"}));
  app.add_option("--nli-url", g.nli_url, "Entailment classifier URL (env NL2FOL_NLI_URL)");
  app.add_option("--unknown-as", g.unknown_as, "fallacy, valid or drop")
      ->check(CLI::IsMember({"fallacy", "valid", "drop"}));
  app.add_option("--out", g.out_dir, "Output directory for traces and reports");
  app.add_option("--parallelism", g.parallelism, "Concurrent examples in eval");
  app.add_flag("--no-interpret", g.no_interpret, "Skip the LLM counterexample explanation");
  app.add_flag("--json", g.json, "Machine-readable output");

  std::string formula, text, file, output, trace_file, smt_file;
  EvalArgs eval_args;

  CLI::App* compile = app.add_subcommand("compile", "Compile a formula to SMT-LIB");
  compile->add_option("formula", formula, "Formula text");
  compile->add_option("--file", file, "Read the formula from a file");
  compile->add_option("-o,--output", output, "Write the script to a file");

  CLI::App* solve = app.add_subcommand("solve", "Run the solver on an SMT-LIB file");
  solve->add_option("script", smt_file, "SMT-LIB file")->required();

  CLI::App* classify = app.add_subcommand("classify", "Classify an argument");
  classify->add_option("text", text, "Argument text");
  classify->add_option("--file", file, "Read the text from a file");

  CLI::App* explain = app.add_subcommand("explain", "Show the counterexample and explanation");
  explain->add_option("text", text, "Argument text");
  explain->add_option("--file", file, "Read the text from a file");
  explain->add_option("--trace", trace_file, "Explain a stored trace instead");

  CLI::App* evaluate = app.add_subcommand("eval", "Evaluate on a labeled dataset");
  evaluate->add_option("dataset", eval_args.datasets, "Dataset files, pooled")->required();
  evaluate->add_option("--format", eval_args.format, "auto, jsonl, csv or snli")
      ->check(CLI::IsMember({"auto", "jsonl", "csv", "snli"}));
  evaluate->add_option("--text-column", eval_args.text_column, "CSV text column");
  evaluate->add_option("--connective", eval_args.connective,
                       "Word joining SNLI premise and hypothesis");
  evaluate->add_option("--source", eval_args.source, "Source tag for rows without one");
  evaluate->add_option("--sample", eval_args.sample, "Balanced sample size per class");
  evaluate->add_option("--seed", eval_args.seed, "Sampling seed");
  evaluate->add_option("--baseline", eval_args.baseline, "Also run end_to_end");

  CLI::App* baseline = app.add_subcommand("baseline", "Single-prompt classifier");
  baseline->add_option("text", text, "Argument text");
  baseline->add_option("--file", file, "Read the text from a file");

  std::vector<std::string> argv_store = {"nl2fol"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const std::string& a : argv_store) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (compile->parsed()) {
      if (formula.empty() == file.empty()) {
        throw ConfigError("give either a formula or --file");
      }
      const std::string source = file.empty() ? formula : ReadFile(file);
      try {
        return CmdCompile(source, output, g.json, out, err);
      } catch (const fol::SyntaxError& e) {
        if (g.json) {
          out << json{{"error", {{"kind", "syntax"}, {"message", e.what()}, {"offset", e.offset()}}}}
                     .dump(2)
              << "\n";
        } else {
          err << "nl2fol compile: syntax error " << e.what() << "\n" << Caret(source, e.offset());
        }
        return kExitSyntax;
      } catch (const smt::IncompatibleSorts& e) {
        if (g.json) {
          out << json{{"error", {{"kind", "IncompatibleSorts"}, {"message", e.what()}}}}.dump(2)
              << "\n";
        } else {
          err << "nl2fol compile: IncompatibleSorts: " << e.what() << "\n";
        }
        return kExitSort;
      } catch (const fol::ArityConflict& e) {
        if (g.json) {
          out << json{{"error", {{"kind", "ArityConflict"}, {"message", e.what()}}}}.dump(2)
              << "\n";
        } else {
          err << "nl2fol compile: ArityConflict: " << e.what() << "\n";
        }
        return kExitSort;
      }
    }
    CliConfig cfg = BuildConfig(g, app, env);
    if (solve->parsed()) return CmdSolve(smt_file, cfg, g.json, out, err);
    if (classify->parsed()) {
      return CmdClassify(InputText(text, file), cfg, false, g.json, out, err);
    }
    if (explain->parsed()) {
      if (!trace_file.empty()) return CmdExplainTrace(trace_file, g.json, out);
      return CmdClassify(InputText(text, file), cfg, true, g.json, out, err);
    }
    if (evaluate->parsed()) return CmdEval(eval_args, cfg, g.json, out, err);
    if (baseline->parsed()) return CmdBaseline(InputText(text, file), cfg, g.json, out);
  } catch (const ConfigError& e) {
    err << "nl2fol: configuration error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "nl2fol: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitUsage;
}

}  // namespace nl2fol::cli
