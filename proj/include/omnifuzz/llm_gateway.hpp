// Copyright 2026 The Omnifuzz Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "httplib.h"
#include "json.hpp"
#include "omnifuzz/hash.hpp"

namespace omnifuzz {

// Sampling knobs for one model invocation. Generation defaults follow the
// usual completion-model setup (temperature 1, top-p 1, 1024 tokens, batches
// of 30); the distillation model caps output at 500 tokens so distilled
// prompts always fit the generation context.
struct SamplingParams {
  double temperature = 1.0;
  double top_p = 1.0;
  int max_tokens = 1024;
  int batch_size = 30;

  static SamplingParams generation_defaults() { return SamplingParams{}; }
  static SamplingParams distillation_defaults() {
    SamplingParams p;
    p.max_tokens = 500;
    p.batch_size = 1;
    return p;
  }

  void validate() const {
    if (temperature < 0) throw std::invalid_argument("temperature must be >= 0");
    if (top_p <= 0 || top_p > 1) throw std::invalid_argument("top_p must be in (0,1]");
    if (max_tokens < 1) throw std::invalid_argument("max_tokens must be >= 1");
    if (batch_size < 1) throw std::invalid_argument("batch_size must be >= 1");
  }

  bool operator==(const SamplingParams&) const = default;
};

enum class EndpointKind { HttpCompletion, HttpChat, Scripted };

inline const char* to_string(EndpointKind k) {
  switch (k) {
    case EndpointKind::HttpCompletion: return "http-completion";
    case EndpointKind::HttpChat: return "http-chat";
    case EndpointKind::Scripted: return "scripted";
  }
  return "?";
}

inline EndpointKind endpoint_kind_from_string(const std::string& s) {
  if (s == "http-completion") return EndpointKind::HttpCompletion;
  if (s == "http-chat") return EndpointKind::HttpChat;
  if (s == "scripted") return EndpointKind::Scripted;
  throw std::invalid_argument("unknown endpoint kind: " + s);
}

struct ModelEndpoint {
  EndpointKind kind = EndpointKind::Scripted;
  std::string base_url;        // http kinds only, e.g. http://host:port/v1
  std::string model_name;
  std::string auth_token_env;  // env var holding the credential; empty = no auth
  std::int64_t request_timeout_ms = 120000;
  std::int64_t retry_backoff_ms = 1000;  // first retry delay; doubles per retry
  int max_retries = 3;                   // network/5xx only
  std::string script_file;               // scripted kind: JSON file of responses
  // Approximate model context, used for prompt-budget checks (0 = unchecked).
  std::int64_t context_tokens = 0;
};

// Crude byte-based token estimate; good enough for budget headroom checks.
inline std::int64_t estimate_tokens(std::string_view text) {
  return static_cast<std::int64_t>((text.size() + 3) / 4);
}

enum class GatewayErrorKind {
  Network,
  HttpStatus,
  Credential,
  Protocol,
  ScriptExhausted,
  FingerprintMismatch,
};

class GatewayError : public std::runtime_error {
 public:
  GatewayError(GatewayErrorKind kind, bool retryable, const std::string& what)
      : std::runtime_error(what), kind_(kind), retryable_(retryable) {}
  GatewayErrorKind kind() const { return kind_; }
  bool retryable() const { return retryable_; }

 private:
  GatewayErrorKind kind_;
  bool retryable_;
};

// A logical request: chat endpoints send the two parts as messages, every
// other kind (and the fingerprint) uses the rendered form.
struct LlmRequest {
  std::string system_text;
  std::string user_text;
};

// Fixed delimiters so the same logical request always renders, and therefore
// fingerprints, identically. The rendered text ends with the user section so
// completion models continue the caller's prefix.
inline std::string render_chat(const std::string& system_text, const std::string& user_text) {
  return "### System\n" + system_text + "\n\n### User\n" + user_text;
}

inline std::string prompt_fingerprint(const LlmRequest& req) {
  return sha256_hex(render_chat(req.system_text, req.user_text));
}

// Canned completions for tests and offline replay. Entries are consumed in
// order; optional fingerprints pin an entry to the exact prompt that should
// have produced it.
struct ScriptedResponses {
  struct Entry {
    std::optional<std::string> expected_fingerprint;
    std::vector<std::string> completions;
  };
  std::vector<Entry> entries;
  std::size_t cursor = 0;

  static ScriptedResponses from_json(const nlohmann::json& j) {
    ScriptedResponses s;
    for (const auto& e : j.at("responses")) {
      Entry entry;
      if (e.contains("fingerprint") && !e.at("fingerprint").is_null())
        entry.expected_fingerprint = e.at("fingerprint").get<std::string>();
      entry.completions = e.at("completions").get<std::vector<std::string>>();
      s.entries.push_back(std::move(entry));
    }
    return s;
  }
};

// Every sample() call is logged (parameters + prompt fingerprint, never the
// credential) so tests can assert the exact request configuration used.
struct RequestRecord {
  std::string fingerprint;
  SamplingParams params;
};

namespace detail {

struct ParsedUrl {
  std::string client_base;  // scheme://host:port
  std::string path_prefix;  // possibly empty
};

inline ParsedUrl parse_base_url(const std::string& base_url) {
  auto scheme_end = base_url.find("://");
  if (scheme_end == std::string::npos)
    throw std::invalid_argument("base_url must start with http:// or https://: " + base_url);
  auto path_start = base_url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {base_url, ""};
  std::string prefix = base_url.substr(path_start);
  while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
  return {base_url.substr(0, path_start), prefix};
}

}  // namespace detail

// One logical model (distillation or generation). Heavyweight HTTP details
// and the scripted test backend hide behind the single sample() contract.
class ModelClient {
 public:
  explicit ModelClient(ModelEndpoint endpoint,
                       std::shared_ptr<ScriptedResponses> script = nullptr)
      : endpoint_(std::move(endpoint)), script_(std::move(script)) {
    if (endpoint_.kind != EndpointKind::Scripted) {
      detail::parse_base_url(endpoint_.base_url);  // validate early
      if (!endpoint_.auth_token_env.empty()) {
        const char* tok = std::getenv(endpoint_.auth_token_env.c_str());
        if (tok == nullptr || *tok == '\0')
          throw GatewayError(GatewayErrorKind::Credential, false,
                             "credential env var not set: " + endpoint_.auth_token_env);
        token_ = tok;
      }
    } else if (!script_) {
      script_ = std::make_shared<ScriptedResponses>();
    }
  }

  const ModelEndpoint& endpoint() const { return endpoint_; }

  // Returns exactly params.batch_size completions or throws GatewayError.
  std::vector<std::string> sample(const LlmRequest& req, const SamplingParams& params) {
    std::lock_guard<std::mutex> lock(mutex_);
    params.validate();
    if (req.system_text.empty() && req.user_text.empty())
      throw std::invalid_argument("empty prompt");
    log_.push_back(RequestRecord{prompt_fingerprint(req), params});
    if (endpoint_.kind == EndpointKind::Scripted) return sample_scripted(req, params);
    return sample_http(req, params);
  }

  const std::vector<RequestRecord>& request_log() const { return log_; }

  // Scripted-cursor checkpointing: resumed campaigns continue mid-script.
  std::size_t script_cursor() const { return script_ ? script_->cursor : 0; }
  void set_script_cursor(std::size_t cursor) {
    if (script_) script_->cursor = cursor;
  }

 private:
  std::vector<std::string> sample_scripted(const LlmRequest& req, const SamplingParams& params) {
    if (script_->cursor >= script_->entries.size())
      throw GatewayError(GatewayErrorKind::ScriptExhausted, false,
                         "scripted responses exhausted after " +
                             std::to_string(script_->entries.size()) + " entries");
    const auto& entry = script_->entries[script_->cursor];
    if (entry.expected_fingerprint) {
      std::string actual = prompt_fingerprint(req);
      if (actual != *entry.expected_fingerprint)
        throw GatewayError(GatewayErrorKind::FingerprintMismatch, false,
                           "scripted entry " + std::to_string(script_->cursor) +
                               " expected prompt " + *entry.expected_fingerprint + ", got " +
                               actual);
    }
    if (entry.completions.size() != static_cast<std::size_t>(params.batch_size))
      throw GatewayError(GatewayErrorKind::Protocol, false,
                         "scripted entry " + std::to_string(script_->cursor) + " has " +
                             std::to_string(entry.completions.size()) +
                             " completions, batch_size is " +
                             std::to_string(params.batch_size));
    ++script_->cursor;
    return entry.completions;
  }

  std::vector<std::string> sample_http(const LlmRequest& req, const SamplingParams& params) {
    auto url = detail::parse_base_url(endpoint_.base_url);
    nlohmann::json payload = {
        {"model", endpoint_.model_name}, {"temperature", params.temperature},
        {"top_p", params.top_p},         {"max_tokens", params.max_tokens},
        {"n", params.batch_size},
    };
    std::string path;
    if (endpoint_.kind == EndpointKind::HttpChat) {
      nlohmann::json messages = nlohmann::json::array();
      if (!req.system_text.empty())
        messages.push_back({{"role", "system"}, {"content", req.system_text}});
      messages.push_back({{"role", "user"}, {"content", req.user_text}});
      payload["messages"] = std::move(messages);
      path = url.path_prefix + "/chat/completions";
    } else {
      payload["prompt"] = render_chat(req.system_text, req.user_text);
      path = url.path_prefix + "/completions";
    }
    std::string body =
        payload.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);

    int attempt = 0;
    while (true) {
      try {
        return post_once(url.client_base, path, body, params);
      } catch (const GatewayError& e) {
        if (!e.retryable() || attempt >= endpoint_.max_retries) throw;
        auto delay = std::chrono::milliseconds(endpoint_.retry_backoff_ms << attempt);
        std::this_thread::sleep_for(delay);
        ++attempt;
      }
    }
  }

  std::vector<std::string> post_once(const std::string& client_base, const std::string& path,
                                     const std::string& body, const SamplingParams& params) {
    httplib::Client client(client_base);
    auto secs = std::chrono::milliseconds(endpoint_.request_timeout_ms);
    client.set_connection_timeout(secs);
    client.set_read_timeout(secs);
    client.set_write_timeout(secs);
    httplib::Headers headers;
    if (!token_.empty()) headers.emplace("Authorization", "Bearer " + token_);

    auto res = client.Post(path, headers, body, "application/json");
    if (!res)
      throw GatewayError(GatewayErrorKind::Network, true,
                         "request to " + client_base + path +
                             " failed: " + httplib::to_string(res.error()));
    if (res->status == 401 || res->status == 403)
      throw GatewayError(GatewayErrorKind::Credential, false,
                         "authentication rejected (HTTP " + std::to_string(res->status) + ")");
    if (res->status >= 500)
      throw GatewayError(GatewayErrorKind::HttpStatus, true,
                         "server error HTTP " + std::to_string(res->status));
    if (res->status < 200 || res->status >= 300)
      throw GatewayError(GatewayErrorKind::HttpStatus, false,
                         "unexpected HTTP " + std::to_string(res->status) + ": " +
                             res->body.substr(0, 512));

    nlohmann::json parsed;
    try {
      parsed = nlohmann::json::parse(res->body);
    } catch (const nlohmann::json::exception& e) {
      throw GatewayError(GatewayErrorKind::Protocol, false,
                         std::string("malformed response body: ") + e.what());
    }
    if (!parsed.contains("choices") || !parsed["choices"].is_array())
      throw GatewayError(GatewayErrorKind::Protocol, false, "response has no choices array");
    std::vector<std::string> completions;
    for (const auto& choice : parsed["choices"]) {
      if (choice.contains("text")) {
        completions.push_back(choice["text"].get<std::string>());
      } else if (choice.contains("message") && choice["message"].contains("content")) {
        completions.push_back(choice["message"]["content"].get<std::string>());
      } else {
        throw GatewayError(GatewayErrorKind::Protocol, false,
                           "choice carries neither text nor message.content");
      }
    }
    if (completions.size() != static_cast<std::size_t>(params.batch_size))
      throw GatewayError(GatewayErrorKind::Protocol, false,
                         "requested n=" + std::to_string(params.batch_size) + " completions, got " +
                             std::to_string(completions.size()));
    return completions;
  }

  ModelEndpoint endpoint_;
  std::shared_ptr<ScriptedResponses> script_;
  std::string token_;  // held in memory only; never logged or persisted
  std::vector<RequestRecord> log_;
  std::mutex mutex_;
};

}  // namespace omnifuzz
