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

#include "autosafe/coding_agent.hpp"

namespace autosafe {

std::string_view to_string(ProvenanceKind kind) {
  switch (kind) {
    case ProvenanceKind::kInitial:
      return "initial";
    case ProvenanceKind::kStaticFix:
      return "static_fix";
    case ProvenanceKind::kFuzzFix:
      return "fuzz_fix";
  }
  return "initial";
}

std::optional<ProvenanceKind> parse_provenance_kind(std::string_view text) {
  for (auto k : {ProvenanceKind::kInitial, ProvenanceKind::kStaticFix, ProvenanceKind::kFuzzFix}) {
    if (to_string(k) == text) return k;
  }
  return std::nullopt;
}

std::string format_findings(std::span<const Finding> findings) {
  std::string out;
  for (std::size_t i = 0; i < findings.size(); ++i) {
    const auto& f = findings[i];
    if (i > 0) out += '\n';
    out += std::to_string(i + 1) + ". " + f.cwe_id + ": " + f.description + '\n';
    out += "   Remediation: " + f.remediation + '\n';
  }
  return out;
}

std::string format_crashes(std::span<const CrashReport> crashes) {
  std::string out;
  for (std::size_t i = 0; i < crashes.size(); ++i) {
    const auto& c = crashes[i];
    if (i > 0) out += '\n';
    out += "Failure " + std::to_string(i + 1) + '\n';
    out += "Arguments (JSON): " + encode_args(c.input) + '\n';
    out += "Error class: " + c.error_class + '\n';
    out += "Error message:\n" + c.error_message + '\n';
  }
  return out;
}

std::string CodingAgent::ask(const TaskSpec& task, TemplateId id, const Bindings& bindings) {
  std::string reply =
      client_.complete(make_request(settings_, id, prompts_.render(id, bindings), task.id));
  try {
    return extract_code_block(reply);
  } catch (const EmptyReply&) {
    throw EmptyGeneration(task.id);
  }
}

CandidateCode CodingAgent::generate_code(const TaskSpec& task) {
  std::string source = ask(task, TemplateId::kCodegen,
                           {{"requirements", task.prompt}, {"entry_point", task.entry_point}});
  return {task.id, 0, std::move(source), {ProvenanceKind::kInitial, 0}};
}

CandidateCode CodingAgent::revise_with_static_feedback(const TaskSpec& task,
                                                       const CandidateCode& code,
                                                       const StaticVerdict& verdict, int round) {
  if (verdict.secure || verdict.findings.empty()) {
    throw ContractViolation("static revision needs at least one finding");
  }
  std::string source = ask(task, TemplateId::kFixFromStatic,
                           {{"requirements", task.prompt},
                            {"entry_point", task.entry_point},
                            {"source", code.source},
                            {"findings", format_findings(verdict.findings)}});
  return {task.id, code.version + 1, std::move(source), {ProvenanceKind::kStaticFix, round}};
}

CandidateCode CodingAgent::revise_with_fuzz_feedback(const TaskSpec& task,
                                                     const CandidateCode& code,
                                                     std::span<const CrashReport> crashes,
                                                     int round) {
  if (crashes.empty()) throw ContractViolation("fuzz revision needs at least one crash");
  std::string source = ask(task, TemplateId::kFixFromFuzz,
                           {{"requirements", task.prompt},
                            {"entry_point", task.entry_point},
                            {"source", code.source},
                            {"crashes", format_crashes(crashes)}});
  return {task.id, code.version + 1, std::move(source), {ProvenanceKind::kFuzzFix, round}};
}

}  // namespace autosafe
