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

// Text completion and entailment judgments, live or from recorded fixtures.

#ifndef NL2FOL_LLM_GATEWAY_H_
#define NL2FOL_LLM_GATEWAY_H_

#include <atomic>
#include <condition_variable>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "nl2fol/llm/prompt.h"
#include "nl2fol/util/error.h"

namespace nl2fol::llm {

class MissingFixture : public Error {
 public:
  MissingFixture(std::string hash, std::string what_for);
  const std::string& hash() const { return hash_; }

 private:
  std::string hash_;
};

class HttpError : public Error {
 public:
  HttpError(int status, std::string detail);
  // 0 when no HTTP response was received at all.
  int status() const { return status_; }

 private:
  int status_;
};

class EmptyResponse : public Error {
 public:
  using Error::Error;
};

struct CompletionRequest {
  std::string prompt;
  std::string model;
  double temperature = 0.0;
  int max_tokens = 1024;
  // Bookkeeping only; not part of the request hash.
  std::string template_id;
  Bindings bindings;

  // Canonical form of the hashed fields.
  nlohmann::json ToJson() const;
  std::string Hash() const;
};

struct CompletionResponse {
  std::string text;
  int prompt_tokens = 0;
  int completion_tokens = 0;
  double latency_seconds = 0.0;

  nlohmann::json ToJson() const;  // latency is not stored
  static CompletionResponse FromJson(const nlohmann::json& j);
};

class LlmBackend {
 public:
  virtual ~LlmBackend() = default;
  virtual CompletionResponse Complete(const CompletionRequest& request) = 0;
};

// Returns P(entailment) for a premise/hypothesis pair.
class EntailmentClassifier {
 public:
  virtual ~EntailmentClassifier() = default;
  virtual double EntailmentProbability(const std::string& premise,
                                       const std::string& hypothesis) = 0;
};

struct HttpSettings {
  std::string base_url;  // e.g. https://api.openai.com/v1
  std::string api_key;
  double timeout_seconds = 60.0;
  int max_attempts = 3;
  double initial_backoff_seconds = 1.0;  // doubled after each failure
};

// POST {base_url}/chat/completions with a single user message.
class HttpChatBackend : public LlmBackend {
 public:
  explicit HttpChatBackend(HttpSettings settings);
  CompletionResponse Complete(const CompletionRequest& request) override;

 private:
  HttpSettings settings_;
};

// POST {url} with {"premise","hypothesis"}; expects {"entailment": p}.
class HttpEntailmentClassifier : public EntailmentClassifier {
 public:
  explicit HttpEntailmentClassifier(HttpSettings settings);
  double EntailmentProbability(const std::string& premise,
                               const std::string& hypothesis) override;

 private:
  HttpSettings settings_;
};

// Content-addressed store: <dir>/<sha256 of request>.json holding
// {"request", "response", "timestamp"} (plus unhashed "metadata").
class FixtureStore {
 public:
  explicit FixtureStore(std::string dir) : dir_(std::move(dir)) {}

  const std::string& dir() const { return dir_; }
  std::string PathFor(const std::string& hash) const;
  std::optional<nlohmann::json> Load(const std::string& hash) const;
  // Atomic write under an advisory lock on <dir>/.lock. Existing entries are
  // left untouched.
  void Save(const std::string& hash, const nlohmann::json& request,
            const nlohmann::json& response, const nlohmann::json& metadata);

 private:
  std::string dir_;
};

enum class Mode { kLive, kRecord, kReplay };
std::string_view ModeName(Mode m);
Mode ParseMode(std::string_view name);  // throws ConfigError

enum class NliBackend { kLlm, kLlmWithContext, kExternalClassifier };
std::string_view NliBackendName(NliBackend b);
NliBackend ParseNliBackend(std::string_view name);  // throws ConfigError

enum class NliLabel { kEntailment, kNotEntailment };
std::string_view NliLabelName(NliLabel l);

struct NliJudgment {
  std::string premise;
  std::string hypothesis;
  NliLabel label = NliLabel::kNotEntailment;
  std::optional<double> confidence;  // classifier backend only
  NliBackend backend = NliBackend::kLlmWithContext;
  bool short_circuit = false;  // decided without any backend call
  std::string raw;             // LLM answer text, if any
  std::string warning;
};

// Label from free-form answer text, or nullopt on a format violation.
std::optional<NliLabel> ParseNliLabel(std::string_view text);

// Removes a surrounding ``` fence and trims whitespace.
std::string StripFences(std::string_view text);

struct GatewayConfig {
  Mode mode = Mode::kReplay;
  std::string fixture_dir;
  std::string model = "gpt-4o";
  double temperature = 0.0;
  int max_tokens = 1024;
  int max_in_flight = 4;
  NliBackend nli_backend = NliBackend::kLlmWithContext;
  double entailment_threshold = 0.80;
};

class Gateway {
 public:
  // `backend` may be null in replay mode; `classifier` is needed only for
  // the external classifier backend outside replay mode.
  Gateway(GatewayConfig config, PromptLibrary prompts,
          std::unique_ptr<LlmBackend> backend,
          std::unique_ptr<EntailmentClassifier> classifier = nullptr);

  const GatewayConfig& config() const { return config_; }
  const PromptLibrary& prompts() const { return prompts_; }

  // Renders `template_id`, appends `appendix` (used for repair re-asks) and
  // returns the completion text with fences stripped. Throws
  // MissingFixture, HttpError, EmptyResponse.
  std::string Complete(const std::string& template_id, const Bindings& bindings,
                       const std::string& appendix = "");

  // Entailment of `hypothesis` by `premise`. `context` is the original
  // sentence, used by the llm_with_context backend.
  NliJudgment Entails(const std::string& premise, const std::string& hypothesis,
                      const std::string& context = "");

  // Completions and classifier queries answered so far (fixtures included).
  int call_count() const { return calls_.load(); }

 private:
  CompletionResponse Dispatch(const CompletionRequest& request);
  double ClassifierProbability(const std::string& premise,
                               const std::string& hypothesis);

  class Slot;

  GatewayConfig config_;
  PromptLibrary prompts_;
  std::unique_ptr<LlmBackend> backend_;
  std::unique_ptr<EntailmentClassifier> classifier_;
  std::optional<FixtureStore> store_;
  std::atomic<int> calls_{0};
  std::mutex mu_;
  std::condition_variable cv_;
  int in_flight_ = 0;
};

}  // namespace nl2fol::llm

#endif  // NL2FOL_LLM_GATEWAY_H_
