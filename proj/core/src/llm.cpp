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

#include "autosafe/llm.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "autosafe/embedded_assets.hpp"

namespace autosafe {

namespace {

constexpr std::array<std::string_view, kTemplateCount> kTemplateNames = {
    "codegen", "static_analyze", "seed_gen", "fix_from_static", "fix_from_fuzz"};

bool is_name_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
         c == '_';
}

// Finds the next `{{name}}` at or after `from`. Returns npos when none.
// Braces that do not enclose a plain name are left as literal text.
std::size_t next_placeholder(std::string_view body, std::size_t from, std::string_view& name,
                             std::size_t& end) {
  while (true) {
    std::size_t open = body.find("{{", from);
    if (open == std::string_view::npos) return open;
    std::size_t i = open + 2;
    while (i < body.size() && is_name_char(body[i])) ++i;
    if (i > open + 2 && body.substr(i, 2) == "}}") {
      name = body.substr(open + 2, i - open - 2);
      end = i + 2;
      return open;
    }
    from = open + 1;
  }
}

std::string trim(std::string_view text) {
  constexpr std::string_view kSpace = " \t\r\n\f\v";
  std::size_t first = text.find_first_not_of(kSpace);
  if (first == std::string_view::npos) return {};
  std::size_t last = text.find_last_not_of(kSpace);
  return std::string(text.substr(first, last - first + 1));
}

}  // namespace

std::string_view to_string(TemplateId id) {
  return kTemplateNames[static_cast<std::size_t>(id)];
}

std::optional<TemplateId> parse_template_id(std::string_view text) {
  for (std::size_t i = 0; i < kTemplateNames.size(); ++i) {
    if (kTemplateNames[i] == text) return static_cast<TemplateId>(i);
  }
  return std::nullopt;
}

std::string render_template(std::string_view body, const Bindings& bindings) {
  std::string out;
  out.reserve(body.size());
  std::size_t pos = 0;
  std::string_view name;
  std::size_t end = 0;
  for (std::size_t open = next_placeholder(body, pos, name, end);
       open != std::string_view::npos; open = next_placeholder(body, pos, name, end)) {
    auto it = bindings.find(name);
    if (it == bindings.end()) throw MissingBinding(std::string(name));
    out.append(body.substr(pos, open - pos));
    out.append(it->second);
    pos = end;
  }
  out.append(body.substr(pos));
  return out;
}

std::vector<std::string> template_placeholders(std::string_view body) {
  std::vector<std::string> names;
  std::set<std::string, std::less<>> seen;
  std::string_view name;
  std::size_t end = 0;
  for (std::size_t open = next_placeholder(body, 0, name, end); open != std::string_view::npos;
       open = next_placeholder(body, end, name, end)) {
    if (seen.insert(std::string(name)).second) names.emplace_back(name);
  }
  return names;
}

PromptLibrary PromptLibrary::builtin() {
  PromptLibrary lib;
  lib.bodies_ = {std::string(assets::k_codegen), std::string(assets::k_static_analyze),
                 std::string(assets::k_seed_gen), std::string(assets::k_fix_from_static),
                 std::string(assets::k_fix_from_fuzz)};
  return lib;
}

PromptLibrary PromptLibrary::from_directory(const std::filesystem::path& dir) {
  PromptLibrary lib = builtin();
  for (std::size_t i = 0; i < kTemplateCount; ++i) {
    auto path = dir / (std::string(kTemplateNames[i]) + ".txt");
    std::ifstream in(path, std::ios::binary);
    if (!in) continue;
    std::ostringstream buf;
    buf << in.rdbuf();
    lib.bodies_[i] = buf.str();
  }
  return lib;
}

const std::string& PromptLibrary::body(TemplateId id) const {
  return bodies_[static_cast<std::size_t>(id)];
}

void PromptLibrary::set_body(TemplateId id, std::string body) {
  bodies_[static_cast<std::size_t>(id)] = std::move(body);
}

std::string PromptLibrary::render(TemplateId id, const Bindings& bindings) const {
  return render_template(body(id), bindings);
}

std::string render_prompt(std::string_view template_id, const Bindings& bindings) {
  auto id = parse_template_id(template_id);
  if (!id) throw UnknownTemplate(std::string(template_id));
  static const PromptLibrary lib = PromptLibrary::builtin();
  return lib.render(*id, bindings);
}

std::string_view to_string(BackendTag tag) {
  switch (tag) {
    case BackendTag::kLive:
      return "live";
    case BackendTag::kReplay:
      return "replay";
    case BackendTag::kMock:
      return "mock";
  }
  return "mock";
}

nlohmann::json canonical_request(const ChatRequest& request) {
  nlohmann::json messages = nlohmann::json::array();
  for (const auto& m : request.messages) {
    messages.push_back({{"role", m.role}, {"content", m.content}});
  }
  return {{"model", request.model},
          {"messages", std::move(messages)},
          {"temperature", request.temperature},
          {"max_tokens", request.max_tokens}};
}

std::string json_digest(const nlohmann::json& value) {
  const std::string text =
      value.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(text.data(), text.size(), md, &len, EVP_sha256(), nullptr) != 1) {
    throw Error("sha256 failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string hex;
  hex.reserve(len * 2);
  for (unsigned int i = 0; i < len; ++i) {
    hex += kHex[md[i] >> 4];
    hex += kHex[md[i] & 0xF];
  }
  return hex;
}

std::string request_digest(const ChatRequest& request) {
  return json_digest(canonical_request(request));
}

std::vector<ReplayEntry> read_replay_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileNotFound(path.string());
  std::vector<ReplayEntry> entries;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(line_no, e.what());
    }
    if (!obj.is_object() || !obj.contains("request_digest") || !obj.contains("response") ||
        !obj["request_digest"].is_string() || !obj["response"].is_string()) {
      throw ParseError(line_no, "replay entry needs string request_digest and response");
    }
    entries.push_back({obj["request_digest"].get<std::string>(),
                       obj["response"].get<std::string>()});
  }
  return entries;
}

ReplayBackend::ReplayBackend(const std::vector<ReplayEntry>& entries) {
  for (const auto& e : entries) responses_.emplace(e.request_digest, e.response);
}

std::unique_ptr<ReplayBackend> ReplayBackend::from_file(const std::filesystem::path& path) {
  return std::make_unique<ReplayBackend>(read_replay_file(path));
}

std::string ReplayBackend::send(const ChatRequest& request) {
  const std::string digest = request_digest(request);
  auto it = responses_.find(digest);
  if (it == responses_.end()) throw ReplayMiss(digest);
  return it->second;
}

ScriptedBackend::ScriptedBackend(std::map<std::string, std::vector<std::string>> script)
    : script_(std::move(script)) {}

std::unique_ptr<ScriptedBackend> ScriptedBackend::from_json(const nlohmann::json& script) {
  std::map<std::string, std::vector<std::string>> parsed;
  if (!script.is_object()) throw ParseError(0, "script must be an object of task id to replies");
  for (const auto& [task, replies] : script.items()) {
    if (!replies.is_array()) throw ParseError(0, "replies for '" + task + "' must be an array");
    for (const auto& r : replies) {
      if (!r.is_string()) throw ParseError(0, "reply for '" + task + "' is not a string");
      parsed[task].push_back(r.get<std::string>());
    }
  }
  return std::make_unique<ScriptedBackend>(std::move(parsed));
}

std::string ScriptedBackend::send(const ChatRequest& request) {
  std::lock_guard lock(mu_);
  auto it = script_.find(request.task_id);
  std::size_t& cursor = cursor_[request.task_id];
  if (it == script_.end() || cursor >= it->second.size()) {
    throw ReplayMiss(request_digest(request));
  }
  return it->second[cursor++];
}

LlmClient::LlmClient(std::shared_ptr<ChatBackend> backend) : backend_(std::move(backend)) {
  if (!backend_) throw ContractViolation("LlmClient needs a backend");
}

std::string LlmClient::complete(const ChatRequest& request) {
  std::string response = backend_->send(request);
  ChatExchange exchange{request, response, backend_->tag(), request_digest(request)};
  std::lock_guard lock(mu_);
  transcript_.push_back(std::move(exchange));
  return response;
}

std::vector<ChatExchange> LlmClient::transcript() const {
  std::lock_guard lock(mu_);
  return transcript_;
}

std::size_t LlmClient::call_count(TemplateId id) const {
  std::lock_guard lock(mu_);
  return static_cast<std::size_t>(
      std::count_if(transcript_.begin(), transcript_.end(),
                    [id](const ChatExchange& e) { return e.request.template_id == id; }));
}

void LlmClient::export_replay(const std::filesystem::path& path) const {
  auto exchanges = transcript();
  // Workers append concurrently; ordering by task id gives a stable file.
  std::stable_sort(exchanges.begin(), exchanges.end(),
                   [](const ChatExchange& a, const ChatExchange& b) {
                     return a.request.task_id < b.request.task_id;
                   });
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write replay file: " + path.string());
  std::set<std::string> seen;
  for (const auto& e : exchanges) {
    if (!seen.insert(e.request_digest).second) continue;
    nlohmann::json line = {{"request_digest", e.request_digest}, {"response", e.response}};
    if (!e.request.task_id.empty()) line["task_id"] = e.request.task_id;
    if (e.request.template_id) line["template"] = std::string(to_string(*e.request.template_id));
    out << line.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace) << '\n';
  }
}

ChatRequest make_request(const LlmSettings& settings, TemplateId id, std::string prompt,
                         std::string task_id) {
  ChatRequest request;
  request.model = settings.model;
  request.messages.push_back({"user", std::move(prompt)});
  request.temperature = settings.temperature;
  request.max_tokens = settings.max_tokens;
  request.task_id = std::move(task_id);
  request.template_id = id;
  return request;
}

std::string extract_code_block(std::string_view reply) {
  std::string result;
  std::size_t open = reply.find("```");
  if (open == std::string_view::npos) {
    result = trim(reply);
  } else {
    std::size_t body = reply.find('\n', open + 3);
    if (body == std::string_view::npos) {
      body = reply.size();
    } else {
      ++body;
    }
    std::size_t close = reply.find("```", body);
    if (close == std::string_view::npos) close = reply.size();
    result = trim(reply.substr(body, close - body));
  }
  if (result.empty()) throw EmptyReply();
  return result;
}

}  // namespace autosafe
