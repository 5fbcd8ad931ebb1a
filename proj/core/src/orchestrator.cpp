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

#include "autosafe/orchestrator.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "autosafe/coding_agent.hpp"
#include "autosafe/fuzzing_agent.hpp"
#include "autosafe/python_source.hpp"
#include "autosafe/rng.hpp"
#include "autosafe/serialization.hpp"
#include "autosafe/static_agent.hpp"

namespace autosafe {

std::string_view to_string(FinalStatus status) {
  switch (status) {
    case FinalStatus::kCompleted:
      return "Completed";
    case FinalStatus::kStaticUnresolved:
      return "StaticUnresolved";
    case FinalStatus::kFuzzUnfixed:
      return "FuzzUnfixed";
    case FinalStatus::kSetupError:
      return "SetupError";
    case FinalStatus::kPipelineError:
      return "PipelineError";
  }
  return "PipelineError";
}

std::optional<FinalStatus> parse_final_status(std::string_view text) {
  for (auto s : {FinalStatus::kCompleted, FinalStatus::kStaticUnresolved, FinalStatus::kFuzzUnfixed,
                 FinalStatus::kSetupError, FinalStatus::kPipelineError}) {
    if (to_string(s) == text) return s;
  }
  return std::nullopt;
}

std::size_t FunctionalResult::passed_count() const {
  return static_cast<std::size_t>(std::count(passed.begin(), passed.end(), true));
}

FinalStatus derive_final_status(const std::optional<StaticLoopTrace>& static_trace,
                                const std::optional<FuzzLoopTrace>& fuzz_trace) {
  if (fuzz_trace && fuzz_trace->status == FuzzStatus::kSetupError) return FinalStatus::kSetupError;
  if (fuzz_trace && fuzz_trace->status == FuzzStatus::kUnfixed) return FinalStatus::kFuzzUnfixed;
  if (static_trace && !static_trace->resolved) return FinalStatus::kStaticUnresolved;
  return FinalStatus::kCompleted;
}

void validate(const PipelineConfig& config) {
  if (config.max_static_rounds < 0) throw ContractViolation("max_static_rounds must be >= 0");
  if (config.max_fuzz_rounds < 0) throw ContractViolation("max_fuzz_rounds must be >= 0");
  if (config.exec_timeout.count() <= 0) throw ContractViolation("exec timeout must be positive");
  if (config.parallelism < 1) throw ContractViolation("parallelism must be >= 1");
  if (config.interpreter_cmd.empty()) throw ContractViolation("interpreter command is empty");
  if (config.output_dir.empty()) throw ContractViolation("output directory is not set");
}

std::uint64_t task_rng_seed(std::uint64_t base, const std::string& task_id) {
  return derive_seed(base, task_id);
}

namespace {

using Clock = std::chrono::steady_clock;

std::chrono::milliseconds since(Clock::time_point start) {
  return std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start);
}

TaskTrace run_core(const TaskSpec& task, const PipelineConfig& config,
                   const PipelineServices& services, std::uint64_t seed) {
  TaskTrace trace;
  trace.task_id = task.id;
  PhaseTimings timings;
  StaticLoopResult static_result;
  FuzzLoopResult fuzz_result;
  bool in_static = false;
  bool in_fuzz = false;
  try {
    CodingAgent coder(services.client, services.prompts, config.llm);
    StaticAgent analyzer(services.client, services.prompts, config.llm);
    FuzzingAgent fuzzer(services.client, services.prompts, config.llm, config.seed_count);

    auto start = Clock::now();
    CandidateCode code = coder.generate_code(task);
    trace.code_versions.push_back(code);
    timings.generate = since(start);

    start = Clock::now();
    in_static = true;
    run_static_loop(task, code, config.max_static_rounds, analyzer, coder, static_result);
    in_static = false;
    trace.static_trace = static_result.trace;
    for (auto& v : static_result.revisions) trace.code_versions.push_back(v);
    code = static_result.code;
    timings.static_loop = since(start);

    if (config.fuzz_enabled) {
      start = Clock::now();
      SeedSet seeds = fuzzer.generate_seeds(task, python::positional_arity(code.source, task.entry_point));
      fuzz_result.trace.seeds_from_fallback = seeds.from_fallback;
      fuzz_result.trace.seeds_rejected = seeds.rejected;
      Rng rng(seed);
      FuzzLoopConfig loop{config.fuzz_budget, config.max_fuzz_rounds};
      in_fuzz = true;
      run_fuzz_fix_loop(services.sandbox, code, task, seeds.seeds, loop, coder, rng, fuzz_result);
      in_fuzz = false;
      trace.fuzz_trace = fuzz_result.trace;
      for (auto& v : fuzz_result.revisions) trace.code_versions.push_back(v);
      timings.fuzz = since(start);
    }
    trace.final_status = derive_final_status(trace.static_trace, trace.fuzz_trace);
  } catch (const std::exception& e) {
    // Keep whatever the interrupted phase produced.
    if (in_static) {
      trace.static_trace = static_result.trace;
      for (auto& v : static_result.revisions) trace.code_versions.push_back(v);
    }
    if (in_fuzz) {
      trace.fuzz_trace = fuzz_result.trace;
      for (auto& v : fuzz_result.revisions) trace.code_versions.push_back(v);
    }
    trace.final_status = FinalStatus::kPipelineError;
    trace.error = e.what();
  }
  if (config.record_timings) trace.timings = timings;
  return trace;
}

bool passes_functional(const CandidateCode* code, const TaskSpec& task, const PipelineConfig& config,
                       const Sandbox& sandbox) {
  if (code == nullptr) return false;
  try {
    ProgramBundle bundle = assemble_functional_program(*code, task);
    return sandbox.execute_raw(bundle, "", config.exec_timeout).classification ==
           Classification::kOk;
  } catch (const std::exception&) {
    return false;
  }
}

}  // namespace

TaskTrace run_task(const TaskSpec& task, const PipelineConfig& config,
                   const PipelineServices& services) {
  const std::uint64_t seed = task_rng_seed(config.rng_seed, task.id);
  TaskTrace trace = run_core(task, config, services, seed);
  if (task.functional_tests && config.n_samples > 0) {
    auto start = Clock::now();
    FunctionalResult result;
    result.passed.push_back(passes_functional(trace.final_code(), task, config, services.sandbox));
    for (std::size_t i = 1; i < config.n_samples; ++i) {
      TaskTrace extra =
          run_core(task, config, services, derive_seed(seed, "sample-" + std::to_string(i)));
      result.passed.push_back(passes_functional(extra.final_code(), task, config, services.sandbox));
    }
    trace.functional = std::move(result);
    if (trace.timings) trace.timings->functional = since(start);
  }
  return trace;
}

std::string trace_file_stem(const std::string& task_id) {
  std::string stem;
  bool changed = task_id.empty();
  for (char c : task_id) {
    const bool safe = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                      c == '_' || c == '-' || c == '.';
    stem += safe ? c : '_';
    changed = changed || !safe;
  }
  if (!stem.empty() && stem.front() == '.') {
    stem.front() = '_';
    changed = true;
  }
  if (changed) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : task_id) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%08llx", static_cast<unsigned long long>(h & 0xffffffffULL));
    stem += "-";
    stem += buf;
  }
  return stem;
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << content;
    if (!out) throw OutputDirUnwritable(path.parent_path().string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw OutputDirUnwritable(path.parent_path().string());
}

void prepare_output(const std::filesystem::path& out) {
  std::error_code ec;
  for (const char* sub : {"traces", "crashes"}) {
    std::filesystem::create_directories(out / sub, ec);
    if (ec) throw OutputDirUnwritable(out.string());
  }
  auto probe = out / ".write-probe";
  {
    std::ofstream p(probe);
    if (!p) throw OutputDirUnwritable(out.string());
  }
  std::filesystem::remove(probe, ec);
}

std::string crash_lines(const TaskTrace& trace) {
  std::string out;
  if (!trace.fuzz_trace) return out;
  for (const auto& round : trace.fuzz_trace->rounds) {
    if (!round.outcome) continue;
    for (const auto& crash : round.outcome->crashes) {
      nlohmann::json j = to_json(crash);
      j["round"] = round.round;
      j["code_version"] = round.code_version;
      out += dump_line(j) + "\n";
    }
  }
  return out;
}

std::optional<TaskTrace> try_resume(const std::filesystem::path& path, const std::string& task_id) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream buf;
  buf << in.rdbuf();
  auto j = nlohmann::json::parse(buf.str(), nullptr, false);
  if (j.is_discarded()) return std::nullopt;
  try {
    TaskTrace t = task_trace_from_json(j);
    if (t.task_id != task_id) return std::nullopt;
    return t;
  } catch (const ParseError&) {
    return std::nullopt;
  }
}

}  // namespace

PipelineReport run_pipeline(const Corpus& corpus, const PipelineConfig& config,
                            std::shared_ptr<ChatBackend> backend,
                            const ProgressCallback& progress) {
  validate(config);
  if (corpus.tasks.empty()) throw ContractViolation("corpus has no tasks");
  prepare_output(config.output_dir);

  SandboxConfig sandbox_config;
  sandbox_config.interpreter_cmd = config.interpreter_cmd;
  sandbox_config.timeout = config.exec_timeout;
  const Sandbox sandbox(sandbox_config);
  const PromptLibrary prompts = config.prompts_dir.empty()
                                    ? PromptLibrary::builtin()
                                    : PromptLibrary::from_directory(config.prompts_dir);
  LlmClient client(std::move(backend));
  const PipelineServices services{client, prompts, sandbox};

  const std::size_t total = corpus.tasks.size();
  PipelineReport report;
  report.traces.resize(total);
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> resumed{0};
  std::mutex progress_mu;
  std::size_t done = 0;
  std::exception_ptr io_error;

  auto worker = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= total) return;
      const TaskSpec& task = corpus.tasks[i];
      const std::string stem = trace_file_stem(task.id);
      const auto trace_path = config.output_dir / "traces" / (stem + ".json");
      std::optional<TaskTrace> trace;
      if (config.resume) trace = try_resume(trace_path, task.id);
      if (trace) {
        ++resumed;
      } else {
        trace = run_task(task, config, services);
        try {
          write_file(trace_path, dump_pretty(to_json(*trace)));
          write_file(config.output_dir / "crashes" / (stem + ".jsonl"), crash_lines(*trace));
        } catch (...) {
          std::lock_guard lock(progress_mu);
          if (!io_error) io_error = std::current_exception();
        }
      }
      report.traces[i] = std::move(*trace);
      std::lock_guard lock(progress_mu);
      ++done;
      if (progress) progress(report.traces[i], done, total);
    }
  };
  {
    std::vector<std::jthread> pool;
    const std::size_t workers = std::min(config.parallelism, total);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  if (io_error) std::rethrow_exception(io_error);

  report.resumed = resumed.load();
  SummaryOptions options = config.summary;
  if (config.n_samples > 0) {
    options.ks.erase(std::remove_if(options.ks.begin(), options.ks.end(),
                                    [&](std::size_t k) { return k > config.n_samples; }),
                     options.ks.end());
  }
  report.summary = summarize(report.traces, options);
  write_file(config.output_dir / "summary.json", dump_pretty(to_json(report.summary)));
  if (client.backend_tag() != BackendTag::kReplay) {
    client.export_replay(config.output_dir / "replay.jsonl");
  }
  return report;
}

std::vector<TaskTrace> load_traces(const std::filesystem::path& traces_dir) {
  std::error_code ec;
  if (!std::filesystem::is_directory(traces_dir, ec)) throw FileNotFound(traces_dir.string());
  std::vector<TaskTrace> traces;
  for (const auto& entry : std::filesystem::directory_iterator(traces_dir)) {
    if (!entry.is_regular_file() || entry.path().extension() != ".json") continue;
    std::ifstream in(entry.path(), std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    auto j = nlohmann::json::parse(buf.str(), nullptr, false);
    if (j.is_discarded()) throw ParseError(0, "not JSON: " + entry.path().string());
    traces.push_back(task_trace_from_json(j));
  }
  std::sort(traces.begin(), traces.end(),
            [](const TaskTrace& a, const TaskTrace& b) { return a.task_id < b.task_id; });
  return traces;
}

}  // namespace autosafe
