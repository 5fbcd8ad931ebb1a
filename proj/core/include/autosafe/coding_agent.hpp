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

#ifndef AUTOSAFE_CODING_AGENT_HPP_
#define AUTOSAFE_CODING_AGENT_HPP_

#include <span>
#include <string>

#include "autosafe/candidate.hpp"
#include "autosafe/corpus.hpp"
#include "autosafe/error.hpp"
#include "autosafe/execution.hpp"
#include "autosafe/llm.hpp"
#include "autosafe/verdict.hpp"

namespace autosafe {

class EmptyGeneration : public Error {
 public:
  explicit EmptyGeneration(const std::string& task_id)
      : Error("model returned no code for task " + task_id) {}
};

// Renders the findings list bound into the static-fix prompt.
std::string format_findings(std::span<const Finding> findings);
// Renders the crash list bound into the fuzz-fix prompt. Error messages are
// kept verbatim, newlines included.
std::string format_crashes(std::span<const CrashReport> crashes);

// Writes and rewrites code through the LLM. Holds no per-task state.
class CodingAgent {
 public:
  CodingAgent(LlmClient& client, const PromptLibrary& prompts, LlmSettings settings)
      : client_(client), prompts_(prompts), settings_(std::move(settings)) {}

  // Version 0, provenance initial.
  CandidateCode generate_code(const TaskSpec& task);

  // Requires a verdict with at least one finding.
  CandidateCode revise_with_static_feedback(const TaskSpec& task, const CandidateCode& code,
                                            const StaticVerdict& verdict, int round);

  // Requires a non-empty crash list.
  CandidateCode revise_with_fuzz_feedback(const TaskSpec& task, const CandidateCode& code,
                                          std::span<const CrashReport> crashes, int round);

 private:
  std::string ask(const TaskSpec& task, TemplateId id, const Bindings& bindings);

  LlmClient& client_;
  const PromptLibrary& prompts_;
  LlmSettings settings_;
};

}  // namespace autosafe

#endif  // AUTOSAFE_CODING_AGENT_HPP_
