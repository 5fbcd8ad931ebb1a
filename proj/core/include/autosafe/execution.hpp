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

#ifndef AUTOSAFE_EXECUTION_HPP_
#define AUTOSAFE_EXECUTION_HPP_

#include <chrono>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

#include "autosafe/value.hpp"

namespace autosafe {

enum class Classification { kOk, kCrash, kTimeout, kSetupError };

std::string_view to_string(Classification c);
std::optional<Classification> parse_classification(std::string_view text);

struct ExecutionResult {
  Classification classification = Classification::kOk;
  // Process exit status; negative signal number when killed by a signal;
  // empty on timeout.
  std::optional<int> exit_code;
  std::string stderr_tail;
  std::chrono::milliseconds duration{0};
  InputTuple input;
};

// A Crash or Timeout observed while fuzzing.
struct CrashReport {
  InputTuple input;
  Classification classification = Classification::kCrash;
  std::string error_class;    // exception class, or "timeout"
  std::string error_message;  // exception line(s) from the traceback
  std::size_t iteration_found = 0;  // 0 for the seed stage
  // Innermost `File "...", line N, in f` frame; empty for timeouts.
  std::string top_frame;

  std::string dedup_key() const { return error_class + '\n' + top_frame; }
  bool operator==(const CrashReport&) const = default;
};

}  // namespace autosafe

#endif  // AUTOSAFE_EXECUTION_HPP_
