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

#ifndef AUTOSAFE_SERIALIZATION_HPP_
#define AUTOSAFE_SERIALIZATION_HPP_

#include <string>

#include <nlohmann/json.hpp>

#include "autosafe/candidate.hpp"
#include "autosafe/execution.hpp"
#include "autosafe/fuzzing_agent.hpp"
#include "autosafe/metrics.hpp"
#include "autosafe/static_agent.hpp"
#include "autosafe/trace.hpp"
#include "autosafe/value.hpp"

// JSON forms of the trace and report types. Decoders throw ParseError.
namespace autosafe {

// {"id", "args", "kinds", "origin"}; `kinds` makes empty containers and
// integral floats round-trip exactly.
nlohmann::json input_to_json(const InputTuple& input);
InputTuple input_from_json(const nlohmann::json& j);

nlohmann::json to_json(const MutationRecord& record);
nlohmann::json to_json(const CandidateCode& code);
nlohmann::json to_json(const StaticVerdict& verdict);
nlohmann::json to_json(const StaticLoopTrace& trace);
nlohmann::json to_json(const CrashReport& crash);
nlohmann::json to_json(const FuzzOutcome& outcome);
nlohmann::json to_json(const FuzzLoopTrace& trace);
nlohmann::json to_json(const TaskTrace& trace);
nlohmann::json to_json(const SummaryReport& report);

MutationRecord mutation_record_from_json(const nlohmann::json& j);
CandidateCode candidate_from_json(const nlohmann::json& j, const std::string& task_id);
StaticVerdict verdict_from_json(const nlohmann::json& j);
StaticLoopTrace static_trace_from_json(const nlohmann::json& j);
CrashReport crash_from_json(const nlohmann::json& j);
FuzzOutcome fuzz_outcome_from_json(const nlohmann::json& j);
FuzzLoopTrace fuzz_trace_from_json(const nlohmann::json& j);
TaskTrace task_trace_from_json(const nlohmann::json& j);

// Pretty-printed (2-space) dump with a trailing newline; stable bytes for
// equal values.
std::string dump_pretty(const nlohmann::json& j);
// Single-line dump for JSONL.
std::string dump_line(const nlohmann::json& j);

}  // namespace autosafe

#endif  // AUTOSAFE_SERIALIZATION_HPP_
