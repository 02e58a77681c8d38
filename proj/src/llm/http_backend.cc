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

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include <chrono>
#include <thread>

#include "nl2fol/llm/gateway.h"

namespace nl2fol::llm {

using nlohmann::json;

namespace {

struct Endpoint {
  std::string origin;  // scheme://host[:port]
  std::string path;
};

Endpoint SplitUrl(const std::string& url, const std::string& suffix) {
  size_t scheme = url.find("://");
  if (scheme == std::string::npos) {
    throw ConfigError("URL needs a scheme: " + url);
  }
  size_t slash = url.find('/', scheme + 3);
  Endpoint e;
  e.origin = url.substr(0, slash);
  std::string path = slash == std::string::npos ? "" : url.substr(slash);
  while (!path.empty() && path.back() == '/') path.pop_back();
  e.path = path + suffix;
  if (e.path.empty()) e.path = "/";
  return e;
}

bool Retryable(int status) { return status == 0 || status == 429 || status >= 500; }

// POSTs `body` with retry; returns the parsed JSON body of a 200 response.
json PostJson(const HttpSettings& s, const Endpoint& ep, const json& body) {
  httplib::Headers headers;
  if (!s.api_key.empty()) {
    headers.emplace("Authorization", "Bearer " + s.api_key);
  }
  const int attempts = std::max(1, s.max_attempts);
  double backoff = s.initial_backoff_seconds;
  int last_status = 0;
  std::string last_detail;
  for (int attempt = 1; attempt <= attempts; ++attempt) {
    httplib::Client client(ep.origin);
    auto timeout = std::chrono::duration<double>(s.timeout_seconds);
    client.set_connection_timeout(
        std::chrono::duration_cast<std::chrono::microseconds>(timeout));
    client.set_read_timeout(
        std::chrono::duration_cast<std::chrono::microseconds>(timeout));
    client.set_write_timeout(
        std::chrono::duration_cast<std::chrono::microseconds>(timeout));
    httplib::Result res =
        client.Post(ep.path, headers, body.dump(), "application/json");
    if (!res) {
      last_status = 0;
      last_detail = httplib::to_string(res.error());
    } else if (res->status == 200) {
      try {
        return json::parse(res->body);
      } catch (const json::exception& e) {
        throw HttpError(200, std::string("response is not JSON: ") + e.what());
      }
    } else {
      last_status = res->status;
      last_detail = res->body.substr(0, 500);
      if (!Retryable(res->status)) break;
    }
    if (attempt < attempts && backoff > 0) {
      std::this_thread::sleep_for(std::chrono::duration<double>(backoff));
      backoff *= 2;
    }
  }
  throw HttpError(last_status, last_detail);
}

}  // namespace

HttpChatBackend::HttpChatBackend(HttpSettings settings)
    : settings_(std::move(settings)) {}

CompletionResponse HttpChatBackend::Complete(const CompletionRequest& request) {
  json body = {{"model", request.model},
               {"messages", json::array({{{"role", "user"},
                                          {"content", request.prompt}}})},
               {"temperature", request.temperature},
               {"max_tokens", request.max_tokens}};
  json reply =
      PostJson(settings_, SplitUrl(settings_.base_url, "/chat/completions"), body);
  CompletionResponse out;
  try {
    const json& content = reply.at("choices").at(0).at("message").at("content");
    if (content.is_string()) out.text = content.get<std::string>();
    if (reply.contains("usage") && reply["usage"].is_object()) {
      out.prompt_tokens = reply["usage"].value("prompt_tokens", 0);
      out.completion_tokens = reply["usage"].value("completion_tokens", 0);
    }
  } catch (const json::exception& e) {
    throw HttpError(200, std::string("unexpected completion shape: ") + e.what());
  }
  if (out.text.empty()) throw EmptyResponse("completion had no content");
  return out;
}

HttpEntailmentClassifier::HttpEntailmentClassifier(HttpSettings settings)
    : settings_(std::move(settings)) {}

double HttpEntailmentClassifier::EntailmentProbability(
    const std::string& premise, const std::string& hypothesis) {
  json reply = PostJson(settings_, SplitUrl(settings_.base_url, ""),
                        json{{"premise", premise}, {"hypothesis", hypothesis}});
  if (!reply.contains("entailment") || !reply["entailment"].is_number()) {
    throw HttpError(200, "classifier reply lacks numeric 'entailment'");
  }
  double p = reply["entailment"].get<double>();
  if (p < 0.0 || p > 1.0) {
    throw HttpError(200, "entailment probability out of range");
  }
  return p;
}

}  // namespace nl2fol::llm
