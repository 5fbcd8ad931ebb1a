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

// HTTP chat-completions backend. Kept apart from llm.cpp so only this unit
// pulls in httplib.

#include <httplib.h>

#include <thread>

#include "autosafe/llm.hpp"

namespace autosafe {

namespace {

// Splits "https://host:port/v1/" into ("https://host:port", "/v1").
void split_base(const std::string& base, std::string& scheme_host_port,
                std::string& prefix) {
  std::size_t scheme_end = base.find("://");
  if (scheme_end == std::string::npos) throw Error("api_base needs a scheme: " + base);
  std::size_t path_start = base.find('/', scheme_end + 3);
  if (path_start == std::string::npos) {
    scheme_host_port = base;
    prefix.clear();
  } else {
    scheme_host_port = base.substr(0, path_start);
    prefix = base.substr(path_start);
  }
  while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
}

}  // namespace

LiveBackend::LiveBackend(LiveBackendConfig config) : config_(std::move(config)) {
  if (config_.api_key.empty()) {
    throw AuthError(std::string("no API key; set ") + kApiKeyEnv);
  }
  split_base(config_.api_base, scheme_host_port_, path_prefix_);
}

std::string LiveBackend::send_once(const std::string& body) {
  httplib::Client client(scheme_host_port_);
  client.set_connection_timeout(std::chrono::seconds(30));
  client.set_read_timeout(config_.timeout);
  client.set_write_timeout(config_.timeout);
  httplib::Headers headers = {{"Authorization", "Bearer " + config_.api_key}};
  auto res = client.Post(path_prefix_ + "/chat/completions", headers, body, "application/json");
  if (!res) {
    throw TransportError("request failed: " + httplib::to_string(res.error()), true);
  }
  const int status = res->status;
  if (status == 401 || status == 403) {
    throw AuthError("endpoint rejected credentials (HTTP " + std::to_string(status) + ")");
  }
  if (status == 429 || status >= 500) {
    throw TransportError("HTTP " + std::to_string(status), true);
  }
  if (status != 200) {
    throw TransportError("HTTP " + std::to_string(status) + ": " + res->body, false);
  }
  nlohmann::json reply;
  try {
    reply = nlohmann::json::parse(res->body);
    const auto& content = reply.at("choices").at(0).at("message").at("content");
    if (content.is_null()) return {};
    return content.get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw TransportError(std::string("malformed completion body: ") + e.what(), false);
  }
}

std::string LiveBackend::send(const ChatRequest& request) {
  const std::string body = canonical_request(request).dump(
      -1, ' ', false, nlohmann::json::error_handler_t::replace);
  auto backoff = config_.initial_backoff;
  for (int attempt = 0;; ++attempt) {
    try {
      return send_once(body);
    } catch (const TransportError& e) {
      if (!e.retryable() || attempt >= config_.max_retries) throw;
    }
    std::this_thread::sleep_for(backoff);
    backoff *= 2;
  }
}

}  // namespace autosafe
