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

#ifndef AUTOSAFE_FUZZING_AGENT_HPP_
#define AUTOSAFE_FUZZING_AGENT_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "autosafe/candidate.hpp"
#include "autosafe/coding_agent.hpp"
#include "autosafe/corpus.hpp"
#include "autosafe/error.hpp"
#include "autosafe/execution.hpp"
#include "autosafe/llm.hpp"
#include "autosafe/rng.hpp"
#include "autosafe/sandbox.hpp"
#include "autosafe/value.hpp"

namespace autosafe {

inline constexpr std::size_t kDefaultFuzzBudget = 150;
inline constexpr int kDefaultMaxFuzzRounds = 3;
inline constexpr std::size_t kDefaultSeedCount = 5;

class NoTypesAvailable : public Error {
 public:
  explicit NoTypesAvailable(const std::string& task_id)
      : Error("task " + task_id + ": no usable seeds and no param_types to synthesize them") {}
};

// Turns a failed execution into a report. Only Crash and Timeout results
// are accepted.
CrashReport make_crash_report(const ExecutionResult& result, std::size_t iteration);

struct ParsedTraceback {
  std::string error_class;
  std::string error_message;
  std::string top_frame;
};

// Reads the last traceback in a stderr capture: the exception line(s) that
// follow the frames, and the innermost frame header.
ParsedTraceback parse_traceback(std::string_view stderr_text);

struct SeedSet {
  std::vector<InputTuple> seeds;
  bool from_fallback = false;
  std::size_t rejected = 0;  // reply entries dropped as malformed or ill-typed
};

// Reads a JSON array of argument arrays. With `types`, entries of the wrong
// arity or kind are dropped (Int widens to Float). Without, the first valid
// entry fixes the arity and entries whose kinds cannot unify with the
// accumulated signature are dropped. Never throws; garbage yields no seeds.
SeedSet parse_seed_reply(std::string_view reply, const std::optional<TypeSignature>& types);

// One tuple of default values (0, 0.0, "", false, empty containers).
InputTuple default_seed(const TypeSignature& types);

struct FuzzOutcome {
  std::size_t executions_run = 0;
  std::vector<CrashReport> crashes;  // at most one per dedup key, in discovery order
  bool clean = false;
  std::size_t seeds_used = 0;
  bool setup_error = false;
  std::string setup_detail;  // stderr tail or assembly error when setup_error

  bool operator==(const FuzzOutcome&) const = default;
};

// Runs every seed, then `budget` mutations drawn round-robin from the pool
// of seeds and passing mutants. A SetupError aborts the loop; crashes do not.
// Zero-arity entry points run once and are never mutated.
FuzzOutcome fuzz_bundle(const Sandbox& sandbox, const ProgramBundle& bundle,
                        std::span<const InputTuple> seeds, std::size_t budget, Rng& rng);

// Assembles the program first; assembly failure is reported as setup_error.
FuzzOutcome fuzz(const Sandbox& sandbox, const CandidateCode& code, const TaskSpec& task,
                 std::span<const InputTuple> seeds, std::size_t budget, Rng& rng);

struct RegressionResult {
  bool passed = false;
  bool setup_error = false;
  std::vector<CrashReport> still_failing;
};

// Reruns previously failing inputs; passes iff every one is now Ok.
RegressionResult run_regression(const Sandbox& sandbox, const CandidateCode& code,
                                const TaskSpec& task, std::span<const InputTuple> failing_inputs);

bool regression_check(const Sandbox& sandbox, const CandidateCode& code, const TaskSpec& task,
                      std::span<const InputTuple> failing_inputs);

enum class FuzzStatus { kNoCrash, kFixed, kUnfixed, kSetupError };

std::string_view to_string(FuzzStatus status);
std::optional<FuzzStatus> parse_fuzz_status(std::string_view text);

struct FuzzRound {
  int round = 0;  // 0 is the initial fuzz
  int code_version = 0;
  // Present for round > 0: the regression rerun of the previous crashes.
  std::optional<bool> regression_passed;
  std::vector<CrashReport> regression_failures;
  // Absent when regression failed, so no re-fuzz happened.
  std::optional<FuzzOutcome> outcome;

  bool operator==(const FuzzRound&) const = default;
};

struct FuzzLoopTrace {
  std::vector<InputTuple> seeds;
  bool seeds_from_fallback = false;
  std::size_t seeds_rejected = 0;
  std::vector<FuzzRound> rounds;
  FuzzStatus status = FuzzStatus::kNoCrash;
  int rounds_used = 0;  // fuzz-fix prompts issued

  bool operator==(const FuzzLoopTrace&) const = default;
};

struct FuzzLoopConfig {
  std::size_t budget = kDefaultFuzzBudget;
  int max_fuzz_rounds = kDefaultMaxFuzzRounds;
};

struct FuzzLoopResult {
  CandidateCode code;
  FuzzLoopTrace trace;
  std::vector<CandidateCode> revisions;
};

// fuzz -> revise -> regression -> re-fuzz, up to max_fuzz_rounds revisions.
// Status: NoCrash if the first fuzz is clean, Fixed if a revision passes
// regression and re-fuzzes clean, SetupError if any execution stage hits a
// setup failure, Unfixed otherwise. If an LLM error escapes, `out` holds the
// state reached so far.
void run_fuzz_fix_loop(const Sandbox& sandbox, const CandidateCode& code, const TaskSpec& task,
                       std::span<const InputTuple> seeds, const FuzzLoopConfig& config,
                       CodingAgent& coder, Rng& rng, FuzzLoopResult& out);

FuzzLoopResult fuzz_fix_loop(const Sandbox& sandbox, const CandidateCode& code,
                             const TaskSpec& task, std::span<const InputTuple> seeds,
                             const FuzzLoopConfig& config, CodingAgent& coder, Rng& rng);

// Asks the LLM for seeds and falls back to default_seed when the reply has
// none. Throws NoTypesAvailable when neither seeds nor types exist.
class FuzzingAgent {
 public:
  FuzzingAgent(LlmClient& client, const PromptLibrary& prompts, LlmSettings settings,
               std::size_t seed_count = kDefaultSeedCount)
      : client_(client), prompts_(prompts), settings_(std::move(settings)), seed_count_(seed_count) {}

  // `code_arity` is the entry point's positional arity when known; a
  // zero-arity function always gets the single empty tuple.
  SeedSet generate_seeds(const TaskSpec& task, std::optional<std::size_t> code_arity = {});

 private:
  LlmClient& client_;
  const PromptLibrary& prompts_;
  LlmSettings settings_;
  std::size_t seed_count_;
};

}  // namespace autosafe

#endif  // AUTOSAFE_FUZZING_AGENT_HPP_
