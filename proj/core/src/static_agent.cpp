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

#include "autosafe/static_agent.hpp"

#include <nlohmann/json.hpp>

namespace autosafe {

namespace {

// End of the balanced {...} starting at `open`, skipping JSON strings; npos
// if unbalanced.
std::size_t match_brace(std::string_view text, std::size_t open) {
  int depth = 0;
  bool in_string = false;
  for (std::size_t i = open; i < text.size(); ++i) {
    char c = text[i];
    if (in_string) {
      if (c == '\\') {
        ++i;
      } else if (c == '"') {
        in_string = false;
      }
      continue;
    }
    if (c == '"') {
      in_string = true;
    } else if (c == '{') {
      ++depth;
    } else if (c == '}') {
      if (--depth == 0) return i;
    }
  }
  return std::string_view::npos;
}

std::optional<nlohmann::json> first_object(std::string_view reply) {
  for (std::size_t open = reply.find('{'); open != std::string_view::npos;
       open = reply.find('{', open + 1)) {
    std::size_t close = match_brace(reply, open);
    if (close == std::string_view::npos) continue;
    auto parsed = nlohmann::json::parse(reply.substr(open, close - open + 1), nullptr, false);
    if (!parsed.is_discarded() && parsed.is_object()) return parsed;
  }
  return std::nullopt;
}

std::string required_string(const nlohmann::json& obj, const char* key, std::size_t index,
                            const std::string& raw) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_string()) {
    throw VerdictParseError("finding " + std::to_string(index) + " needs string '" + key + "'",
                            raw);
  }
  return it->get<std::string>();
}

}  // namespace

bool is_cwe_id(std::string_view text) {
  if (text.size() <= 4 || text.substr(0, 4) != "CWE-") return false;
  for (char c : text.substr(4)) {
    if (c < '0' || c > '9') return false;
  }
  return true;
}

StaticVerdict parse_verdict(std::string_view reply) {
  const std::string raw(reply);
  auto obj = first_object(reply);
  if (!obj) throw VerdictParseError("no JSON object in reply", raw);

  auto secure_it = obj->find("secure");
  if (secure_it == obj->end() || !secure_it->is_boolean()) {
    throw VerdictParseError("'secure' must be a boolean", raw);
  }
  auto findings_it = obj->find("findings");
  if (findings_it == obj->end() || !findings_it->is_array()) {
    throw VerdictParseError("'findings' must be an array", raw);
  }

  StaticVerdict verdict;
  verdict.secure = secure_it->get<bool>();
  verdict.raw_reply = raw;
  for (std::size_t i = 0; i < findings_it->size(); ++i) {
    const auto& f = (*findings_it)[i];
    if (!f.is_object()) throw VerdictParseError("finding " + std::to_string(i) + " is not an object", raw);
    Finding finding{required_string(f, "cwe_id", i, raw), required_string(f, "description", i, raw),
                    required_string(f, "remediation", i, raw)};
    if (!is_cwe_id(finding.cwe_id)) {
      throw VerdictParseError("'" + finding.cwe_id + "' is not of the form CWE-<n>", raw);
    }
    verdict.findings.push_back(std::move(finding));
  }
  if (verdict.secure != verdict.findings.empty()) {
    throw VerdictParseError(verdict.secure ? "secure verdict lists findings"
                                           : "insecure verdict lists no findings",
                            raw);
  }
  return verdict;
}

StaticVerdict StaticAgent::analyze(const CandidateCode& code) {
  if (code.source.empty()) throw ContractViolation("cannot analyze empty source");
  std::string prompt = prompts_.render(TemplateId::kStaticAnalyze, {{"source", code.source}});
  return parse_verdict(client_.complete(
      make_request(settings_, TemplateId::kStaticAnalyze, std::move(prompt), code.task_id)));
}

void run_static_loop(const TaskSpec& task, const CandidateCode& code, int max_rounds,
                     StaticAgent& analyzer, CodingAgent& coder, StaticLoopResult& out) {
  if (max_rounds < 0) throw ContractViolation("max_rounds must be >= 0");
  out.code = code;
  out.trace = StaticLoopTrace{};
  out.trace.final_version = code.version;
  out.revisions.clear();
  for (int round = 0;; ++round) {
    StaticVerdict verdict;
    try {
      verdict = analyzer.analyze(out.code);
    } catch (const VerdictParseError& e) {
      out.trace.parse_failure = e.what();
      out.trace.parse_failure_reply = e.raw_reply();
      return;
    }
    out.trace.verdicts.push_back(verdict);
    if (verdict.secure) {
      out.trace.resolved = true;
      return;
    }
    if (round == max_rounds) return;
    out.code = coder.revise_with_static_feedback(task, out.code, verdict, round + 1);
    out.revisions.push_back(out.code);
    out.trace.rounds_used = round + 1;
    out.trace.final_version = out.code.version;
  }
}

StaticLoopResult static_loop(const TaskSpec& task, const CandidateCode& code, int max_rounds,
                             StaticAgent& analyzer, CodingAgent& coder) {
  StaticLoopResult result;
  run_static_loop(task, code, max_rounds, analyzer, coder, result);
  return result;
}

}  // namespace autosafe
