// Copyright 2026 The AutoSafe Authors.
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

#ifndef AUTOSAFE_LLM_HPP_
#define AUTOSAFE_LLM_HPP_

#include <array>
#include <chrono>
#include <cstddef>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "autosafe/error.hpp"

namespace autosafe {

// ---------------------------------------------------------------------------
// Prompt templates

// One id per agent prompt: initial generation, static review, seed
// generation, and the two repair prompts.
enum class TemplateId {
  kCodegen,
  kStaticAnalyze,
  kSeedGen,
  kFixFromStatic,
  kFixFromFuzz,
};

inline constexpr std::size_t kTemplateCount = 5;

std::string_view to_string(TemplateId id);
std::optional<TemplateId> parse_template_id(std::string_view text);

class MissingBinding : public Error {
 public:
  explicit MissingBinding(const std::string& name)
      : Error("missing prompt binding: " + name), name_(name) {}
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

class UnknownTemplate : public Error {
 public:
  explicit UnknownTemplate(const std::string& id)
      : Error("unknown prompt template: " + id) {}
};

using Bindings = std::map<std::string, std::string, std::less<>>;

// Substitutes `{{name}}` placeholders in one pass. Bound values are inserted
// verbatim and never re-scanned. Throws MissingBinding for the first
// placeholder without a binding; extra bindings are ignored.
std::string render_template(std::string_view body, const Bindings& bindings);

// Placeholder names in order of first appearance.
std::vector<std::string> template_placeholders(std::string_view body);

class PromptLibrary {
 public:
  // Bodies compiled in from core/assets/prompts.
  static PromptLibrary builtin();
  // Loads <dir>/<id>.txt for each id that exists; others stay builtin.
  static PromptLibrary from_directory(const std::filesystem::path& dir);

  const std::string& body(TemplateId id) const;
  void set_body(TemplateId id, std::string body);
  std::string render(TemplateId id, const Bindings& bindings) const;

 private:
  std::array<std::string, kTemplateCount> bodies_;
};

// String-keyed entry point over the builtin library; throws UnknownTemplate.
std::string render_prompt(std::string_view template_id, const Bindings& bindings);

// ---------------------------------------------------------------------------
// Chat exchange model

struct ChatMessage {
  std::string role;
  std::string content;
  bool operator==(const ChatMessage&) const = default;
};

struct ChatRequest {
  std::string model;
  std::vector<ChatMessage> messages;
  double temperature = 0.0;
  int max_tokens = 2048;

  // Routing metadata. Not sent over the wire and not part of the digest.
  std::string task_id;
  std::optional<TemplateId> template_id;
};

enum class BackendTag { kLive, kReplay, kMock };
std::string_view to_string(BackendTag tag);

struct ChatExchange {
  ChatRequest request;
  std::string response;
  BackendTag backend = BackendTag::kReplay;
  std::string request_digest;
};

// The wire object: {model, messages[{role, content}], temperature,
// max_tokens}. nlohmann::json keeps object keys sorted, which makes the
// dump canonical.
nlohmann::json canonical_request(const ChatRequest& request);

// Lowercase hex SHA-256 of the compact canonical dump of `value`. Key order
// of the input object never matters.
std::string json_digest(const nlohmann::json& value);
std::string request_digest(const ChatRequest& request);

class AuthError : public Error {
 public:
  using Error::Error;
};

class TransportError : public Error {
 public:
  TransportError(const std::string& what, bool retryable)
      : Error(what), retryable_(retryable) {}
  bool retryable() const { return retryable_; }

 private:
  bool retryable_;
};

class ReplayMiss : public Error {
 public:
  explicit ReplayMiss(const std::string& digest)
      : Error("no recorded response for request " + digest), digest_(digest) {}
  const std::string& digest() const { return digest_; }

 private:
  std::string digest_;
};

class EmptyReply : public Error {
 public:
  EmptyReply() : Error("model reply contains no code") {}
};

// ---------------------------------------------------------------------------
// Backends

class ChatBackend {
 public:
  virtual ~ChatBackend() = default;
  virtual std::string send(const ChatRequest& request) = 0;
  virtual BackendTag tag() const = 0;
};

struct ReplayEntry {
  std::string request_digest;
  std::string response;
};

// JSONL of {request_digest, response}; other fields are ignored on read.
std::vector<ReplayEntry> read_replay_file(const std::filesystem::path& path);

// Serves recorded responses on exact digest match only. Read-only after
// construction, so concurrent send() calls are safe.
class ReplayBackend : public ChatBackend {
 public:
  explicit ReplayBackend(const std::vector<ReplayEntry>& entries);
  static std::unique_ptr<ReplayBackend> from_file(const std::filesystem::path& path);

  std::string send(const ChatRequest& request) override;
  BackendTag tag() const override { return BackendTag::kReplay; }
  std::size_t size() const { return responses_.size(); }

 private:
  std::unordered_map<std::string, std::string> responses_;
};

// Answers through a callable; used for scripted agents in tests and for
// recording fixture files.
class MockBackend : public ChatBackend {
 public:
  using Handler = std::function<std::string(const ChatRequest&)>;
  explicit MockBackend(Handler handler) : handler_(std::move(handler)) {}

  std::string send(const ChatRequest& request) override { return handler_(request); }
  BackendTag tag() const override { return BackendTag::kMock; }

 private:
  Handler handler_;
};

// Per task id, hands out scripted replies in call order. Thread-safe.
class ScriptedBackend : public ChatBackend {
 public:
  explicit ScriptedBackend(std::map<std::string, std::vector<std::string>> script);
  // {"<task_id>": ["reply 1", "reply 2", ...], ...}
  static std::unique_ptr<ScriptedBackend> from_json(const nlohmann::json& script);

  std::string send(const ChatRequest& request) override;
  BackendTag tag() const override { return BackendTag::kMock; }

 private:
  std::mutex mu_;
  std::map<std::string, std::vector<std::string>> script_;
  std::map<std::string, std::size_t> cursor_;
};

struct LiveBackendConfig {
  // Chat-completions base, e.g. https://api.openai.com/v1. The request goes
  // to <api_base>/chat/completions.
  std::string api_base = "https://api.openai.com/v1";
  std::string api_key;
  std::chrono::seconds timeout{120};
  int max_retries = 3;
  std::chrono::milliseconds initial_backoff{500};
};

// Bearer-token POST of chat-completions JSON. 401/403 raise AuthError;
// 429, 5xx and connection failures are retryable TransportErrors and are
// retried up to max_retries times with doubling backoff.
class LiveBackend : public ChatBackend {
 public:
  explicit LiveBackend(LiveBackendConfig config);

  std::string send(const ChatRequest& request) override;
  BackendTag tag() const override { return BackendTag::kLive; }

 private:
  std::string send_once(const std::string& body);

  LiveBackendConfig config_;
  std::string scheme_host_port_;
  std::string path_prefix_;
};

// Environment variable holding the live API credential.
inline constexpr const char* kApiKeyEnv = "AUTOSAFE_API_KEY";

// ---------------------------------------------------------------------------
// Client

// Front door for all agents: forwards to the backend and records every
// completed exchange.
class LlmClient {
 public:
  explicit LlmClient(std::shared_ptr<ChatBackend> backend);

  std::string complete(const ChatRequest& request);

  std::vector<ChatExchange> transcript() const;
  std::size_t call_count(TemplateId id) const;
  BackendTag backend_tag() const { return backend_->tag(); }

  // Writes the transcript as a replay file, one line per distinct digest,
  // ordered by task id and then call order within the task.
  void export_replay(const std::filesystem::path& path) const;

 private:
  std::shared_ptr<ChatBackend> backend_;
  mutable std::mutex mu_;
  std::vector<ChatExchange> transcript_;
};

// Common request fields for the agents.
struct LlmSettings {
  std::string model = "gpt-4o";
  double temperature = 0.0;
  int max_tokens = 2048;
};

ChatRequest make_request(const LlmSettings& settings, TemplateId id,
                         std::string prompt, std::string task_id);

// Contents of the first fenced block (language tag dropped), or the whole
// reply when there is no fence; whitespace-trimmed either way. Throws
// EmptyReply when the result is blank.
std::string extract_code_block(std::string_view reply);

}  // namespace autosafe

#endif  // AUTOSAFE_LLM_HPP_
