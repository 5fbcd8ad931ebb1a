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

// Runs the pipeline against scripted model replies and keeps the resulting
// replay.jsonl, so offline fixtures can be regenerated after prompt changes.
// The replay only matches when later runs use the same interpreter, seed
// and budgets as the recording.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "autosafe/corpus.hpp"
#include "autosafe/llm.hpp"
#include "autosafe/orchestrator.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Record replay fixtures from scripted replies"};
  std::string tasks, script_path, out, interpreter = "python3";
  autosafe::PipelineConfig config;
  double timeout_secs = 6.0;
  app.add_option("--tasks", tasks, "Native task corpus")->required();
  app.add_option("--script", script_path, "JSON object of task id to reply list")->required();
  app.add_option("--out", out, "Output directory")->required();
  app.add_option("--interpreter", interpreter)->capture_default_str();
  app.add_option("--seed", config.rng_seed)->capture_default_str();
  app.add_option("--fuzz-budget", config.fuzz_budget)->capture_default_str();
  app.add_option("--max-static-rounds", config.max_static_rounds)->capture_default_str();
  app.add_option("--max-fuzz-rounds", config.max_fuzz_rounds)->capture_default_str();
  app.add_option("--timeout-secs", timeout_secs)->capture_default_str();
  app.add_option("--n-samples", config.n_samples)->capture_default_str();
  CLI11_PARSE(app, argc, argv);

  try {
    std::ifstream in(script_path);
    if (!in) throw autosafe::FileNotFound(script_path);
    auto backend = autosafe::ScriptedBackend::from_json(nlohmann::json::parse(in));
    auto corpus = autosafe::load_corpus(tasks, autosafe::CorpusFormat::kNative);

    std::istringstream words(interpreter);
    config.interpreter_cmd.clear();
    for (std::string w; words >> w;) config.interpreter_cmd.push_back(w);
    config.exec_timeout = std::chrono::milliseconds(static_cast<long long>(timeout_secs * 1000));
    config.output_dir = out;

    auto report = autosafe::run_pipeline(corpus, config, std::move(backend));
    for (const auto& t : report.traces) {
      std::cerr << t.task_id << ": " << autosafe::to_string(t.final_status);
      if (!t.error.empty()) std::cerr << " (" << t.error << ")";
      std::cerr << "\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
