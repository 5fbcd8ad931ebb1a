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

#ifndef AUTOSAFE_STATIC_AGENT_HPP_
#define AUTOSAFE_STATIC_AGENT_HPP_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "autosafe/candidate.hpp"
#include "autosafe/coding_agent.hpp"
#include "autosafe/corpus.hpp"
#include "autosafe/error.hpp"
#include "autosafe/llm.hpp"
#include "autosafe/verdict.hpp"

namespace autosafe {

class VerdictParseError : public Error {
 public:
  VerdictParseError(const std::string& what, std::string raw_reply)
      : Error("unparseable verdict: " + what), raw_reply_(std::move(raw_reply)) {}
  const std::string& raw_reply() const { return raw_reply_; }

 private:
  std::string raw_reply_;
};

// Reads {"secure": bool, "findings": [{"cwe_id", "description",
// "remediation"}]} from a reply. The object may sit inside a code fence or
// prose; the first span that parses as a JSON object is the one validated.
// Unknown keys are ignored. Throws VerdictParseError.
StaticVerdict parse_verdict(std::string_view reply);

bool is_cwe_id(std::string_view text);

class StaticAgent {
 public:
  StaticAgent(LlmClient& client, const PromptLibrary& prompts, LlmSettings settings)
      : client_(client), prompts_(prompts), settings_(std::move(settings)) {}

  StaticVerdict analyze(const CandidateCode& code);

 private:
  LlmClient& client_;
  const PromptLibrary& prompts_;
  LlmSettings settings_;
};

struct StaticLoopTrace {
  int rounds_used = 0;  // fix prompts issued
  std::vector<StaticVerdict> verdicts;  // one per analysis, in order
  bool resolved = false;
  int final_version = 0;
  // Set when the loop stopped on an unparseable reply.
  std::optional<std::string> parse_failure;
  std::optional<std::string> parse_failure_reply;

  bool operator==(const StaticLoopTrace&) const = default;
};

struct StaticLoopResult {
  CandidateCode code;
  StaticLoopTrace trace;
  std::vector<CandidateCode> revisions;  // versions produced by the loop
};

// analyze -> revise until secure or max_rounds fixes were issued. An
// unresolved loop still returns its last code. If an LLM error escapes,
// `out` holds the state reached so far.
void run_static_loop(const TaskSpec& task, const CandidateCode& code, int max_rounds,
                     StaticAgent& analyzer, CodingAgent& coder, StaticLoopResult& out);

StaticLoopResult static_loop(const TaskSpec& task, const CandidateCode& code, int max_rounds,
                             StaticAgent& analyzer, CodingAgent& coder);

}  // namespace autosafe

#endif  // AUTOSAFE_STATIC_AGENT_HPP_
