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

#include "nl2fol/llm/gateway.h"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <algorithm>
#include <cctype>
#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "nl2fol/util/hash.h"

namespace nl2fol::llm {

using nlohmann::json;

MissingFixture::MissingFixture(std::string hash, std::string what_for)
    : Error("no recorded fixture " + hash + " for " + what_for),
      hash_(std::move(hash)) {}

HttpError::HttpError(int status, std::string detail)
    : Error(status == 0 ? "HTTP request failed: " + detail
                        : "HTTP " + std::to_string(status) + ": " + detail),
      status_(status) {}

json CompletionRequest::ToJson() const {
  return json{{"kind", "chat"},
              {"model", model},
              {"prompt", prompt},
              {"temperature", temperature},
              {"max_tokens", max_tokens}};
}

std::string CompletionRequest::Hash() const {
  return Sha256Hex(ToJson().dump());
}

json CompletionResponse::ToJson() const {
  return json{{"text", text},
              {"usage",
               {{"prompt_tokens", prompt_tokens},
                {"completion_tokens", completion_tokens}}}};
}

CompletionResponse CompletionResponse::FromJson(const json& j) {
  CompletionResponse r;
  r.text = j.at("text").get<std::string>();
  if (j.contains("usage")) {
    r.prompt_tokens = j["usage"].value("prompt_tokens", 0);
    r.completion_tokens = j["usage"].value("completion_tokens", 0);
  }
  return r;
}

std::string FixtureStore::PathFor(const std::string& hash) const {
  return (std::filesystem::path(dir_) / (hash + ".json")).string();
}

std::optional<json> FixtureStore::Load(const std::string& hash) const {
  std::ifstream in(PathFor(hash), std::ios::binary);
  if (!in) return std::nullopt;
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw IoError("corrupt fixture " + PathFor(hash) + ": " + e.what());
  }
}

namespace {

std::string UtcTimestamp() {
  std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

class FileLock {
 public:
  explicit FileLock(const std::string& path) {
    fd_ = open(path.c_str(), O_RDWR | O_CREAT | O_CLOEXEC, 0644);
    if (fd_ < 0) throw IoError("cannot open lock file " + path);
    while (flock(fd_, LOCK_EX) != 0) {
      if (errno != EINTR) throw IoError("cannot lock " + path);
    }
  }
  ~FileLock() {
    flock(fd_, LOCK_UN);
    close(fd_);
  }
  FileLock(const FileLock&) = delete;
  FileLock& operator=(const FileLock&) = delete;

 private:
  int fd_ = -1;
};

}  // namespace

void FixtureStore::Save(const std::string& hash, const json& request,
                        const json& response, const json& metadata) {
  namespace fs = std::filesystem;
  fs::create_directories(dir_);
  FileLock lock((fs::path(dir_) / ".lock").string());
  const std::string path = PathFor(hash);
  if (fs::exists(path)) return;
  json doc = {{"request", request},
              {"response", response},
              {"timestamp", UtcTimestamp()}};
  if (!metadata.is_null()) doc["metadata"] = metadata;
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << doc.dump(2) << "\n";
    if (!out) throw IoError("cannot write " + tmp);
  }
  fs::rename(tmp, path);
}

std::string_view ModeName(Mode m) {
  switch (m) {
    case Mode::kLive:
      return "live";
    case Mode::kRecord:
      return "record";
    case Mode::kReplay:
      break;
  }
  return "replay";
}

Mode ParseMode(std::string_view name) {
  for (Mode m : {Mode::kLive, Mode::kRecord, Mode::kReplay}) {
    if (ModeName(m) == name) return m;
  }
  throw ConfigError("unknown mode '" + std::string(name) +
                    "' (expected live, record or replay)");
}

std::string_view NliBackendName(NliBackend b) {
  switch (b) {
    case NliBackend::kLlm:
      return "llm";
    case NliBackend::kLlmWithContext:
      return "llm_with_context";
    case NliBackend::kExternalClassifier:
      break;
  }
  return "external_classifier";
}

NliBackend ParseNliBackend(std::string_view name) {
  for (NliBackend b : {NliBackend::kLlm, NliBackend::kLlmWithContext,
                       NliBackend::kExternalClassifier}) {
    if (NliBackendName(b) == name) return b;
  }
  throw ConfigError("unknown NLI backend '" + std::string(name) + "'");
}

std::string_view NliLabelName(NliLabel l) {
  return l == NliLabel::kEntailment ? "ENTAILMENT" : "NOT_ENTAILMENT";
}

std::optional<NliLabel> ParseNliLabel(std::string_view text) {
  std::string up(text);
  for (char& c : up) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  for (const char* neg : {"NOT_ENTAILMENT", "NOT ENTAILMENT", "NOT-ENTAILMENT",
                          "NON_ENTAILMENT", "NON-ENTAILMENT", "NEUTRAL",
                          "CONTRADICTION"}) {
    if (up.find(neg) != std::string::npos) return NliLabel::kNotEntailment;
  }
  if (up.find("ENTAILMENT") != std::string::npos) return NliLabel::kEntailment;
  return std::nullopt;
}

std::string StripFences(std::string_view text) {
  auto trim = [](std::string_view s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return std::string();
    size_t e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
  };
  std::string t = trim(text);
  if (t.rfind("```", 0) == 0) {
    size_t first_nl = t.find('\n');
    size_t last = t.rfind("```");
    if (first_nl != std::string::npos && last > first_nl) {
      return trim(std::string_view(t).substr(first_nl + 1, last - first_nl - 1));
    }
  }
  return t;
}

// Bounds the number of concurrent backend calls.
class Gateway::Slot {
 public:
  explicit Slot(Gateway& g) : g_(g) {
    std::unique_lock<std::mutex> lock(g_.mu_);
    g_.cv_.wait(lock, [&] {
      return g_.in_flight_ < std::max(1, g_.config_.max_in_flight);
    });
    ++g_.in_flight_;
  }
  ~Slot() {
    {
      std::lock_guard<std::mutex> lock(g_.mu_);
      --g_.in_flight_;
    }
    g_.cv_.notify_one();
  }

 private:
  Gateway& g_;
};

Gateway::Gateway(GatewayConfig config, PromptLibrary prompts,
                 std::unique_ptr<LlmBackend> backend,
                 std::unique_ptr<EntailmentClassifier> classifier)
    : config_(std::move(config)),
      prompts_(std::move(prompts)),
      backend_(std::move(backend)),
      classifier_(std::move(classifier)) {
  if (config_.mode != Mode::kLive) {
    if (config_.fixture_dir.empty()) {
      throw ConfigError(std::string(ModeName(config_.mode)) +
                        " mode needs a fixture directory");
    }
    store_.emplace(config_.fixture_dir);
  }
  if (config_.mode != Mode::kReplay && backend_ == nullptr) {
    throw ConfigError(std::string(ModeName(config_.mode)) +
                      " mode needs an LLM backend");
  }
}

CompletionResponse Gateway::Dispatch(const CompletionRequest& request) {
  ++calls_;
  const std::string hash = request.Hash();
  if (store_) {
    if (std::optional<json> doc = store_->Load(hash)) {
      return CompletionResponse::FromJson(doc->at("response"));
    }
    if (config_.mode == Mode::kReplay) {
      throw MissingFixture(hash, "template " + request.template_id);
    }
  }
  CompletionResponse response;
  {
    Slot slot(*this);
    auto start = std::chrono::steady_clock::now();
    response = backend_->Complete(request);
    response.latency_seconds = std::chrono::duration<double>(
                                   std::chrono::steady_clock::now() - start)
                                   .count();
  }
  if (config_.mode == Mode::kRecord) {
    store_->Save(hash, request.ToJson(), response.ToJson(),
                 json{{"template_id", request.template_id},
                      {"bindings", request.bindings}});
  }
  return response;
}

std::string Gateway::Complete(const std::string& template_id,
                              const Bindings& bindings,
                              const std::string& appendix) {
  CompletionRequest request;
  request.prompt = prompts_.Render(template_id, bindings) + appendix;
  request.model = config_.model;
  request.temperature = config_.temperature;
  request.max_tokens = config_.max_tokens;
  request.template_id = template_id;
  request.bindings = bindings;
  std::string text = StripFences(Dispatch(request).text);
  if (text.empty()) {
    throw EmptyResponse("empty completion for template " + template_id);
  }
  return text;
}

double Gateway::ClassifierProbability(const std::string& premise,
                                      const std::string& hypothesis) {
  ++calls_;
  json request = {{"kind", "nli_classifier"},
                  {"premise", premise},
                  {"hypothesis", hypothesis}};
  const std::string hash = Sha256Hex(request.dump());
  if (store_) {
    if (std::optional<json> doc = store_->Load(hash)) {
      return doc->at("response").at("entailment").get<double>();
    }
    if (config_.mode == Mode::kReplay) {
      throw MissingFixture(hash, "entailment classifier");
    }
  }
  if (classifier_ == nullptr) {
    throw ConfigError("external_classifier backend needs a classifier URL");
  }
  double p;
  {
    Slot slot(*this);
    p = classifier_->EntailmentProbability(premise, hypothesis);
  }
  if (config_.mode == Mode::kRecord) {
    store_->Save(hash, request, json{{"entailment", p}}, nullptr);
  }
  return p;
}

NliJudgment Gateway::Entails(const std::string& premise,
                             const std::string& hypothesis,
                             const std::string& context) {
  NliJudgment j;
  j.premise = premise;
  j.hypothesis = hypothesis;
  j.backend = config_.nli_backend;
  if (StripFences(premise) == StripFences(hypothesis)) {
    j.label = NliLabel::kEntailment;
    j.short_circuit = true;
    return j;
  }
  if (config_.nli_backend == NliBackend::kExternalClassifier) {
    double p = ClassifierProbability(premise, hypothesis);
    j.confidence = p;
    j.label = p >= config_.entailment_threshold ? NliLabel::kEntailment
                                                : NliLabel::kNotEntailment;
    return j;
  }
  Bindings b = {{"premise", premise}, {"hypothesis", hypothesis}};
  if (config_.nli_backend == NliBackend::kLlmWithContext) b["sentence"] = context;
  j.raw = Complete("nli_relation", b);
  std::optional<NliLabel> label = ParseNliLabel(j.raw);
  if (!label) {
    j.raw = Complete("nli_relation", b,
                     "\n\nAnswer with exactly one word: ENTAILMENT or "
                     "NOT_ENTAILMENT.");
    label = ParseNliLabel(j.raw);
  }
  if (!label) {
    j.warning = "unparseable NLI answer; treated as NOT_ENTAILMENT";
    label = NliLabel::kNotEntailment;
  }
  j.label = *label;
  return j;
}

}  // namespace nl2fol::llm
