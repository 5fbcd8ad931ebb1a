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

#ifndef AUTOSAFE_TRACE_HPP_
#define AUTOSAFE_TRACE_HPP_

#include <chrono>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "autosafe/candidate.hpp"
#include "autosafe/fuzzing_agent.hpp"
#include "autosafe/static_agent.hpp"

namespace autosafe {

enum class FinalStatus {
  kCompleted,
  kStaticUnresolved,
  kFuzzUnfixed,
  kSetupError,
  kPipelineError,
};

std::string_view to_string(FinalStatus status);
std::optional<FinalStatus> parse_final_status(std::string_view text);

struct PhaseTimings {
  std::chrono::milliseconds generate{0};
  std::chrono::milliseconds static_loop{0};
  std::chrono::milliseconds fuzz{0};
  std::chrono::milliseconds functional{0};
  bool operator==(const PhaseTimings&) const = default;
};

// Functional-test results for the samples drawn for one task.
struct FunctionalResult {
  std::vector<bool> passed;  // one entry per sample
  std::size_t samples() const { return passed.size(); }
  std::size_t passed_count() const;
  bool operator==(const FunctionalResult&) const = default;
};

// Everything that happened to one task. Phases appear in pipeline order:
// generation, static loop, fuzz loop.
struct TaskTrace {
  std::string task_id;
  std::vector<CandidateCode> code_versions;
  std::optional<StaticLoopTrace> static_trace;
  std::optional<FuzzLoopTrace> fuzz_trace;
  FinalStatus final_status = FinalStatus::kCompleted;
  std::string error;  // PipelineError text
  std::optional<FunctionalResult> functional;
  std::optional<PhaseTimings> timings;

  const CandidateCode* final_code() const {
    return code_versions.empty() ? nullptr : &code_versions.back();
  }
  bool operator==(const TaskTrace&) const = default;
};

// Precedence: SetupError, then FuzzUnfixed, then StaticUnresolved.
FinalStatus derive_final_status(const std::optional<StaticLoopTrace>& static_trace,
                                const std::optional<FuzzLoopTrace>& fuzz_trace);

}  // namespace autosafe

#endif  // AUTOSAFE_TRACE_HPP_
