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

#ifndef AUTOSAFE_ORCHESTRATOR_HPP_
#define AUTOSAFE_ORCHESTRATOR_HPP_

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "autosafe/corpus.hpp"
#include "autosafe/error.hpp"
#include "autosafe/llm.hpp"
#include "autosafe/metrics.hpp"
#include "autosafe/sandbox.hpp"
#include "autosafe/trace.hpp"

namespace autosafe {

struct PipelineConfig {
  int max_static_rounds = 4;
  std::size_t fuzz_budget = kDefaultFuzzBudget;
  std::chrono::milliseconds exec_timeout = kDefaultExecTimeout;
  int max_fuzz_rounds = kDefaultMaxFuzzRounds;
  std::uint64_t rng_seed = 0;
  std::size_t parallelism = 1;
  std::vector<std::string> interpreter_cmd = {"python3"};
  std::filesystem::path output_dir;
  LlmSettings llm;
  std::size_t seed_count = kDefaultSeedCount;
  // Off for a generation-only baseline run.
  bool fuzz_enabled = true;
  // Functional-test samples per task for pass@k; 0 skips functional runs.
  std::size_t n_samples = 1;
  // Skip tasks whose trace file already exists in output_dir.
  bool resume = false;
  // Wall-clock phase timings make traces differ run to run, so they are
  // only recorded on request.
  bool record_timings = false;
  // Directory of prompt overrides (<template_id>.txt); empty for builtins.
  std::filesystem::path prompts_dir;
  SummaryOptions summary;
};

// Throws ContractViolation naming the first invalid field.
void validate(const PipelineConfig& config);

class OutputDirUnwritable : public Error {
 public:
  explicit OutputDirUnwritable(const std::string& path)
      : Error("output directory is not writable: " + path) {}
};

// Shared services for running tasks.
struct PipelineServices {
  LlmClient& client;
  const PromptLibrary& prompts;
  const Sandbox& sandbox;
};

// Seed for a task's random source; independent of corpus order.
std::uint64_t task_rng_seed(std::uint64_t base, const std::string& task_id);

// generate -> static loop -> fuzz loop, plus functional samples when the
// task has tests. Never throws: failures become PipelineError traces.
TaskTrace run_task(const TaskSpec& task, const PipelineConfig& config,
                   const PipelineServices& services);

struct PipelineReport {
  std::vector<TaskTrace> traces;  // corpus order
  SummaryReport summary;
  std::size_t resumed = 0;
};

using ProgressCallback = std::function<void(const TaskTrace& trace, std::size_t done,
                                            std::size_t total)>;

// Runs the corpus on a bounded worker pool and writes
//   <out>/traces/<task>.json, <out>/crashes/<task>.jsonl, <out>/summary.json
// and, unless the backend is a replay, <out>/replay.jsonl.
// Throws OutputDirUnwritable, SpawnError, ContractViolation.
PipelineReport run_pipeline(const Corpus& corpus, const PipelineConfig& config,
                            std::shared_ptr<ChatBackend> backend,
                            const ProgressCallback& progress = {});

// File-name stem for a task id: unsafe characters become '_' and, if any
// were replaced, a hash of the original id is appended.
std::string trace_file_stem(const std::string& task_id);

// Loads every *.json trace in a directory, sorted by task id.
std::vector<TaskTrace> load_traces(const std::filesystem::path& traces_dir);

}  // namespace autosafe

#endif  // AUTOSAFE_ORCHESTRATOR_HPP_
