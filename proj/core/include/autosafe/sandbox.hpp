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

#ifndef AUTOSAFE_SANDBOX_HPP_
#define AUTOSAFE_SANDBOX_HPP_

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "autosafe/candidate.hpp"
#include "autosafe/corpus.hpp"
#include "autosafe/error.hpp"
#include "autosafe/execution.hpp"
#include "autosafe/value.hpp"

namespace autosafe {

// Harness exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitCrash = 1;
inline constexpr int kExitSetup = 2;

inline constexpr std::chrono::milliseconds kDefaultExecTimeout{6000};
inline constexpr std::size_t kStderrTailLimit = 8 * 1024;

// A runnable program: the candidate slice embedded in the harness.
struct ProgramBundle {
  std::string source;
  std::string entry_point;
  // Empty means the executing sandbox's interpreter.
  std::vector<std::string> interpreter_cmd;
  // Parent for the per-execution working directories; empty means the
  // system temp directory. Every execution gets its own fresh subdirectory.
  std::filesystem::path workdir;
};

enum class HarnessMode { kFuzz, kFunctional };

// Fills the harness template. `candidate_source` is embedded verbatim.
std::string render_harness(std::string_view candidate_source, std::string_view entry_point,
                           HarnessMode mode, std::string_view tests_source = {});

// Slices the entry point and its dependencies out of the candidate, prefixes
// the task's setup imports, and wraps the result in the harness. Throws
// python::EntryPointNotFound and python::SyntaxUnparseable.
ProgramBundle assemble_program(const CandidateCode& code, const TaskSpec& task);

// Same, but the harness runs the task's `check(candidate)` tests instead of
// reading arguments. Requires task.functional_tests.
ProgramBundle assemble_functional_program(const CandidateCode& code, const TaskSpec& task);

// The interpreter could not be found or started at all.
class SpawnError : public Error {
 public:
  using Error::Error;
};

struct SandboxConfig {
  std::vector<std::string> interpreter_cmd = {"python3"};
  std::chrono::milliseconds timeout = kDefaultExecTimeout;
  std::filesystem::path work_root;  // empty: system temp directory
  // Runs in the child between fork and exec, e.g. to apply setrlimit or a
  // syscall filter. Must be async-signal-safe. Off by default.
  std::function<void()> child_hook;
};

// Executes bundles in child processes: own process group, fresh working
// directory, allow-listed environment, stdout discarded, stderr tail kept,
// whole group killed at the deadline. Safe for concurrent use.
class Sandbox {
 public:
  // Resolves interpreter_cmd[0] against PATH; throws SpawnError if missing.
  explicit Sandbox(SandboxConfig config);

  const SandboxConfig& config() const { return config_; }
  const std::string& interpreter_path() const { return interpreter_path_; }

  ExecutionResult execute(const ProgramBundle& bundle, const InputTuple& input) const;
  ExecutionResult execute(const ProgramBundle& bundle, const InputTuple& input,
                          std::chrono::milliseconds limit) const;
  // Feeds `stdin_text` as is; `input` in the result is left empty.
  ExecutionResult execute_raw(const ProgramBundle& bundle, std::string_view stdin_text,
                              std::chrono::milliseconds limit) const;

 private:
  SandboxConfig config_;
  std::string interpreter_path_;
};

// exit 0 -> Ok, 2 -> SetupError, other exits and signals -> Crash.
Classification classify_exit(int wait_status);

// Last `limit` bytes of `text`, starting on a UTF-8 character boundary.
std::string utf8_tail(std::string_view text, std::size_t limit);

// Absolute path of an executable, searching PATH when `name` has no slash.
std::optional<std::string> find_executable(const std::string& name);

}  // namespace autosafe

#endif  // AUTOSAFE_SANDBOX_HPP_
