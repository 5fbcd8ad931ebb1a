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

#include "cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "autosafe/corpus.hpp"
#include "autosafe/fuzzing_agent.hpp"
#include "autosafe/llm.hpp"
#include "autosafe/metrics.hpp"
#include "autosafe/orchestrator.hpp"
#include "autosafe/python_source.hpp"
#include "autosafe/sandbox.hpp"
#include "autosafe/serialization.hpp"

namespace autosafe::cli {

namespace {

struct RunOptions {
  std::string tasks;
  std::string format = "native";
  std::string out = "autosafe-out";
  std::string backend;
  std::string replay_file;
  std::string api_base = "https://api.openai.com/v1";
  std::string model = "gpt-4o";
  double temperature = 0.0;
  int max_static_rounds = 4;
  std::size_t fuzz_budget = kDefaultFuzzBudget;
  int max_fuzz_rounds = kDefaultMaxFuzzRounds;
  double timeout_secs = 6.0;
  std::uint64_t seed = 0;
  std::size_t parallelism = 1;
  std::string interpreter = "python3";
  bool resume = false;
  std::size_t n_samples = 1;
  std::size_t seed_count = kDefaultSeedCount;
  std::string labels;
  std::string baseline_labels;
  std::string prompts_dir;
  bool no_fuzz = false;
  bool record_timings = false;
};

struct FuzzOneOptions {
  std::string file;
  std::string entry;
  std::size_t budget = kDefaultFuzzBudget;
  double timeout_secs = 6.0;
  std::uint64_t seed = 0;
  std::string types;
  std::string seeds_json;
  std::string interpreter = "python3";
};

struct ReportOptions {
  std::string traces_dir;
  std::string labels;
  std::string baseline_labels;
};

// Thrown for anything the operator has to fix before rerunning.
class ConfigError : public Error {
 public:
  using Error::Error;
};

std::vector<std::string> split_words(const std::string& text) {
  std::istringstream in(text);
  std::vector<std::string> words;
  for (std::string w; in >> w;) words.push_back(w);
  return words;
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileNotFound(path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::chrono::milliseconds to_limit(double secs) {
  if (!(secs > 0)) throw ConfigError("timeout must be positive");
  return std::chrono::milliseconds(static_cast<long long>(secs * 1000.0 + 0.5));
}

void add_run_options(CLI::App* sub, RunOptions& o, bool replay_only) {
  sub->add_option("--tasks", o.tasks, "Task corpus (JSONL or JSON array)")->required();
  sub->add_option("--format", o.format, "Corpus format")
      ->check(CLI::IsMember({"native", "security-eval-like", "human-eval-like"}))
      ->capture_default_str();
  sub->add_option("--out", o.out, "Output directory")->capture_default_str();
  if (!replay_only) {
    sub->add_option("--backend", o.backend,
                    "LLM backend (default: replay when --replay-file is given, else live)")
        ->check(CLI::IsMember({"live", "replay"}));
    sub->add_option("--replay-file", o.replay_file, "Recorded {request_digest, response} JSONL");
  } else {
    sub->add_option("--replay-file", o.replay_file, "Recorded {request_digest, response} JSONL")
        ->required();
  }
  sub->add_option("--api-base", o.api_base, "Chat-completions base URL")->capture_default_str();
  sub->add_option("--model", o.model, "Model name")->capture_default_str();
  sub->add_option("--temperature", o.temperature, "Sampling temperature")->capture_default_str();
  sub->add_option("--max-static-rounds", o.max_static_rounds, "Static fix rounds")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  sub->add_option("--fuzz-budget", o.fuzz_budget, "Mutation iterations per fuzz run")
      ->capture_default_str();
  sub->add_option("--max-fuzz-rounds", o.max_fuzz_rounds, "Fuzz fix rounds")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  sub->add_option("--timeout-secs", o.timeout_secs, "Per-execution wall-clock limit")
      ->capture_default_str();
  sub->add_option("--seed", o.seed, "Base random seed")->capture_default_str();
  sub->add_option("--parallelism", o.parallelism, "Concurrent tasks")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sub->add_option("--interpreter", o.interpreter, "Interpreter command, e.g. \"python3 -S\"")
      ->capture_default_str();
  sub->add_flag("--resume", o.resume, "Skip tasks whose trace already exists");
  sub->add_option("--n-samples", o.n_samples, "Functional-test samples per task for pass@k")
      ->capture_default_str();
  sub->add_option("--seed-count", o.seed_count, "Seeds requested from the model")
      ->capture_default_str();
  sub->add_option("--labels", o.labels, "Scanner labels JSONL for this run");
  sub->add_option("--baseline-labels", o.baseline_labels, "Scanner labels JSONL for a baseline run");
  sub->add_option("--prompts-dir", o.prompts_dir, "Directory of prompt template overrides");
  sub->add_flag("--no-fuzz", o.no_fuzz, "Stop after the static loop (baseline runs)");
  sub->add_flag("--record-timings", o.record_timings, "Store per-phase wall-clock timings");
}

std::shared_ptr<ChatBackend> make_backend(const RunOptions& o, const std::string& backend) {
  if (backend == "replay") {
    if (o.replay_file.empty()) throw ConfigError("--backend replay needs --replay-file");
    try {
      return ReplayBackend::from_file(o.replay_file);
    } catch (const Error& e) {
      throw ConfigError(std::string("cannot load replay file: ") + e.what());
    }
  }
  if (!o.replay_file.empty()) throw ConfigError("--replay-file cannot be combined with --backend live");
  const char* key = std::getenv(kApiKeyEnv);
  if (key == nullptr || *key == '\0') {
    throw ConfigError(std::string("live backend needs the ") + kApiKeyEnv + " environment variable");
  }
  LiveBackendConfig live;
  live.api_base = o.api_base;
  live.api_key = key;
  return std::make_shared<LiveBackend>(live);
}

int cmd_run(const RunOptions& o, bool replay_only, std::ostream& err) {
  const std::string backend_name =
      replay_only ? "replay" : (!o.backend.empty() ? o.backend : (o.replay_file.empty() ? "live" : "replay"));
  auto format = parse_corpus_format(o.format);
  Corpus corpus = load_corpus(o.tasks, *format);
  if (corpus.tasks.empty()) throw ConfigError("corpus " + o.tasks + " has no tasks");

  PipelineConfig config;
  config.max_static_rounds = o.max_static_rounds;
  config.fuzz_budget = o.fuzz_budget;
  config.exec_timeout = to_limit(o.timeout_secs);
  config.max_fuzz_rounds = o.max_fuzz_rounds;
  config.rng_seed = o.seed;
  config.parallelism = o.parallelism;
  config.interpreter_cmd = split_words(o.interpreter);
  config.output_dir = o.out;
  config.llm.model = o.model;
  config.llm.temperature = o.temperature;
  config.seed_count = o.seed_count;
  config.fuzz_enabled = !o.no_fuzz;
  config.n_samples = o.n_samples;
  config.resume = o.resume;
  config.record_timings = o.record_timings;
  config.prompts_dir = o.prompts_dir;

  std::set<std::string> ids;
  for (const auto& t : corpus.tasks) ids.insert(t.id);
  if (!o.labels.empty()) config.summary.labels = ingest_scanner_labels(o.labels, &ids);
  if (!o.baseline_labels.empty()) {
    config.summary.baseline_labels = ingest_scanner_labels(o.baseline_labels, &ids);
  }
  for (const auto* set : {&config.summary.labels, &config.summary.baseline_labels}) {
    if (*set) {
      for (const auto& w : (*set)->warnings) err << "warning: " << w << "\n";
    }
  }

  auto backend = make_backend(o, backend_name);
  auto progress = [&err](const TaskTrace& t, std::size_t done, std::size_t total) {
    err << "[" << done << "/" << total << "] " << t.task_id << ": " << to_string(t.final_status);
    if (t.final_status == FinalStatus::kPipelineError) err << " (" << t.error << ")";
    err << "\n";
  };
  PipelineReport report = run_pipeline(corpus, config, backend, progress);

  std::size_t failures = report.summary.final_status[FinalStatus::kPipelineError];
  err << "wrote " << report.traces.size() << " traces to " << o.out;
  if (report.resumed > 0) err << " (" << report.resumed << " resumed)";
  err << "\n";
  return failures == 0 ? kExitOk : kExitTaskFailures;
}

int cmd_fuzz_one(const FuzzOneOptions& o, std::ostream& out) {
  const std::string source = read_text(o.file);
  try {
    python::extract_function(source, o.entry);
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }

  std::optional<TypeSignature> types;
  if (!o.types.empty()) {
    TypeSignature sig;
    std::string list = o.types;
    for (char& c : list) {
      if (c == ',') c = ' ';
    }
    for (const auto& word : split_words(list)) {
      auto kind = parse_fuzz_kind(word);
      if (!kind) throw ConfigError("unknown type '" + word + "' in --types");
      sig.push_back(*kind);
    }
    types = sig;
  }

  std::vector<InputTuple> seeds;
  if (!o.seeds_json.empty()) {
    const std::string text = o.seeds_json.front() == '[' ? o.seeds_json : read_text(o.seeds_json);
    auto parsed = nlohmann::json::parse(text, nullptr, false);
    if (parsed.is_discarded() || !parsed.is_array()) {
      throw ConfigError("--seeds-json must be a JSON array of argument arrays");
    }
    SeedSet set = parse_seed_reply(text, types);
    if (set.rejected > 0) {
      throw ConfigError(std::to_string(set.rejected) + " seed(s) in --seeds-json do not fit the types");
    }
    seeds = std::move(set.seeds);
  }
  if (seeds.empty()) {
    if (types) {
      seeds.push_back(default_seed(*types));
    } else if (python::positional_arity(source, o.entry) == std::optional<std::size_t>(0)) {
      seeds.push_back(InputTuple{});
    } else {
      throw ConfigError("give --types or --seeds-json so seeds can be built");
    }
  }

  SandboxConfig sc;
  sc.interpreter_cmd = split_words(o.interpreter);
  sc.timeout = to_limit(o.timeout_secs);
  Sandbox sandbox(sc);
  TaskSpec task;
  task.id = "fuzz-one";
  task.prompt = o.file;
  task.entry_point = o.entry;
  task.param_types = types;
  CandidateCode code{task.id, 0, source, {}};
  Rng rng(o.seed);
  FuzzOutcome outcome = fuzz(sandbox, code, task, seeds, o.budget, rng);
  out << dump_pretty(to_json(outcome));
  if (outcome.setup_error) return kExitSetupError;
  return outcome.crashes.empty() ? kExitOk : kExitCrashesFound;
}

int cmd_report(const ReportOptions& o, std::ostream& out, std::ostream& err) {
  std::filesystem::path dir = o.traces_dir;
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) throw ConfigError("no such directory: " + o.traces_dir);
  if (std::filesystem::is_directory(dir / "traces", ec)) dir /= "traces";
  std::vector<TaskTrace> traces = load_traces(dir);
  std::set<std::string> ids;
  for (const auto& t : traces) ids.insert(t.task_id);
  SummaryOptions options;
  const auto* known = traces.empty() ? nullptr : &ids;
  if (!o.labels.empty()) options.labels = ingest_scanner_labels(o.labels, known);
  if (!o.baseline_labels.empty()) options.baseline_labels = ingest_scanner_labels(o.baseline_labels, known);
  for (const auto* set : {&options.labels, &options.baseline_labels}) {
    if (*set) {
      for (const auto& w : (*set)->warnings) err << "warning: " << w << "\n";
    }
  }
  out << dump_pretty(to_json(summarize(traces, options)));
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multi-agent secure code generation: generate, review, fuzz, repair."};
  app.name(args.empty() ? "autosafe" : args.front());
  app.require_subcommand(1);

  RunOptions run_opts;
  RunOptions replay_opts;
  FuzzOneOptions fuzz_opts;
  ReportOptions report_opts;

  auto* run_cmd = app.add_subcommand("run", "Run the pipeline over a task corpus");
  add_run_options(run_cmd, run_opts, false);
  auto* replay_cmd = app.add_subcommand("replay", "Rerun a recorded session offline");
  add_run_options(replay_cmd, replay_opts, true);

  auto* fuzz_cmd = app.add_subcommand("fuzz-one", "Fuzz one local source file, no LLM involved");
  fuzz_cmd->add_option("--file", fuzz_opts.file, "Python source file")->required();
  fuzz_cmd->add_option("--entry", fuzz_opts.entry, "Function under test")->required();
  fuzz_cmd->add_option("--budget", fuzz_opts.budget, "Mutation iterations")->capture_default_str();
  fuzz_cmd->add_option("--timeout", fuzz_opts.timeout_secs, "Per-execution limit in seconds")
      ->capture_default_str();
  fuzz_cmd->add_option("--seed", fuzz_opts.seed, "Random seed")->capture_default_str();
  fuzz_cmd->add_option("--types", fuzz_opts.types, "Parameter kinds, e.g. int,str,list[str]");
  fuzz_cmd->add_option("--seeds-json", fuzz_opts.seeds_json,
                       "Seed argument arrays as JSON text, or a file holding them");
  fuzz_cmd->add_option("--interpreter", fuzz_opts.interpreter, "Interpreter command")
      ->capture_default_str();

  auto* report_cmd = app.add_subcommand("report", "Summarize the traces of a run");
  report_cmd->add_option("--traces-dir", report_opts.traces_dir, "Trace directory or run output directory")
      ->required();
  report_cmd->add_option("--labels", report_opts.labels, "Scanner labels JSONL");
  report_cmd->add_option("--baseline-labels", report_opts.baseline_labels,
                         "Scanner labels JSONL for a baseline run");

  std::vector<char*> argv;
  std::vector<std::string> storage = args.empty() ? std::vector<std::string>{"autosafe"} : args;
  for (auto& a : storage) argv.push_back(a.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << (app.get_subcommands().empty() ? app.help() : app.get_subcommands().front()->help());
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n";
    err << (app.get_subcommands().empty() ? app.help() : app.get_subcommands().front()->help());
    return kExitConfig;
  }

  try {
    if (*run_cmd) return cmd_run(run_opts, false, err);
    if (*replay_cmd) return cmd_run(replay_opts, true, err);
    if (*fuzz_cmd) return cmd_fuzz_one(fuzz_opts, out);
    if (*report_cmd) return cmd_report(report_opts, out, err);
  } catch (const std::exception& e) {
    // Per-task failures never get here; anything that does is a setup
    // problem the operator must fix.
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitConfig;
}

}  // namespace autosafe::cli
