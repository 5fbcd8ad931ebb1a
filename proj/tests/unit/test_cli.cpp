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

#include <gtest/gtest.h>

#include <sstream>

#include "autosafe/llm.hpp"
#include "cli.hpp"
#include "test_support.hpp"

namespace autosafe {
namespace {

using testing::TempDir;

struct Invocation {
  int code = -1;
  std::string out;
  std::string err;
};

Invocation invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "autosafe");
  std::ostringstream out, err;
  Invocation inv;
  inv.code = cli::run(args, out, err);
  inv.out = out.str();
  inv.err = err.str();
  return inv;
}

std::string fixture(const std::string& rel) { return testing::fixture_path(rel).string(); }

TEST(Cli, HelpAndUsageErrors) {
  EXPECT_EQ(invoke({"--help"}).code, 0);
  EXPECT_EQ(invoke({"run", "--help"}).code, 0);
  const auto missing = invoke({"run"});
  EXPECT_EQ(missing.code, cli::kExitConfig);
  EXPECT_NE(missing.err.find("--tasks"), std::string::npos);
  EXPECT_EQ(invoke({"frobnicate"}).code, cli::kExitConfig);
  EXPECT_EQ(invoke({"run", "--tasks", "x.jsonl", "--parallelism", "many"}).code, cli::kExitConfig);
}

TEST(Cli, ReplayReproducesTheRecordedFixture) {
  TempDir out;
  const auto inv = invoke({"replay", "--tasks", fixture("mini/tasks.jsonl"), "--replay-file",
                           fixture("mini/replay.jsonl"), "--out", out.path().string(), "--seed", "7",
                           "--interpreter", "python3 -S"});
  ASSERT_EQ(inv.code, 0) << inv.err;
  EXPECT_NE(inv.err.find("[5/5]"), std::string::npos);
  const auto summary = nlohmann::json::parse(testing::read_file(out.path() / "summary.json"));
  EXPECT_EQ(summary["task_count"], 5);
  EXPECT_EQ(summary["fuzz_buckets"]["Fixed"], 1);
  EXPECT_EQ(summary["static_fix_histogram"]["unable"], 1);

  // Two of the five tasks flagged; the stray id is dropped with a warning.
  const auto labels = out.path() / "labels.jsonl";
  testing::write_file(labels,
                      "{\"task_id\": \"add_numbers\", \"vulnerable\": false}\n"
                      "{\"task_id\": \"safe_divide\", \"vulnerable\": false}\n"
                      "{\"task_id\": \"check_credentials\", \"vulnerable\": true}\n"
                      "{\"task_id\": \"count_words\", \"vulnerable\": false}\n"
                      "{\"task_id\": \"evaluate_expression\", \"vulnerable\": true}\n"
                      "{\"task_id\": \"not_in_run\", \"vulnerable\": true}\n");
  const auto report = invoke({"report", "--traces-dir", out.path().string(), "--labels", labels.string()});
  ASSERT_EQ(report.code, 0) << report.err;
  EXPECT_NE(report.err.find("not_in_run"), std::string::npos);
  const auto j = nlohmann::json::parse(report.out);
  EXPECT_EQ(j["task_count"], 5);
  EXPECT_EQ(j["external_vuln"]["pipeline"]["vulnerable"], 2);
  EXPECT_NEAR(j["external_vuln"]["pipeline"]["fraction"].get<double>(), 0.4, 1e-12);
}

TEST(Cli, ReplayMissesMakeTasksFailWithExitOne) {
  TempDir out, replay;
  testing::write_file(replay.path() / "empty.jsonl", "");
  const auto inv = invoke({"replay", "--tasks", fixture("mini/tasks.jsonl"), "--replay-file",
                           (replay.path() / "empty.jsonl").string(), "--out", out.path().string(),
                           "--interpreter", "python3 -S"});
  EXPECT_EQ(inv.code, cli::kExitTaskFailures);
  EXPECT_NE(inv.err.find("PipelineError"), std::string::npos);
}

TEST(Cli, ConfigurationErrors) {
  TempDir out;
  const std::string tasks = fixture("mini/tasks.jsonl");
  EXPECT_EQ(invoke({"run", "--tasks", tasks, "--replay-file", fixture("mini/replay.jsonl"), "--backend",
                    "live", "--out", out.path().string()})
                .code,
            cli::kExitConfig);
  ::unsetenv(kApiKeyEnv);
  const auto no_key = invoke({"run", "--tasks", tasks, "--backend", "live", "--out", out.path().string()});
  EXPECT_EQ(no_key.code, cli::kExitConfig);
  EXPECT_NE(no_key.err.find(kApiKeyEnv), std::string::npos);
  EXPECT_EQ(invoke({"replay", "--tasks", tasks, "--replay-file", fixture("mini/replay.jsonl"), "--timeout-secs",
                    "0", "--out", out.path().string()})
                .code,
            cli::kExitConfig);
  EXPECT_EQ(invoke({"replay", "--tasks", "/nonexistent.jsonl", "--replay-file", fixture("mini/replay.jsonl"),
                    "--out", out.path().string()})
                .code,
            cli::kExitConfig);
  EXPECT_EQ(invoke({"report", "--traces-dir", "/nonexistent-dir"}).code, cli::kExitConfig);
}

TEST(Cli, FuzzOneExitCodes) {
  const std::string divide = fixture("programs/divide.py");
  const auto crash = invoke({"fuzz-one", "--file", divide, "--entry", "divide", "--budget", "10",
                             "--seeds-json", "[[4, 0], [3, 2]]", "--interpreter", "python3 -S"});
  ASSERT_EQ(crash.code, cli::kExitCrashesFound) << crash.err;
  const auto j = nlohmann::json::parse(crash.out);
  EXPECT_EQ(j["executions_run"], 12);
  EXPECT_EQ(j["crashes"][0]["error_class"], "ZeroDivisionError");

  const auto clean = invoke({"fuzz-one", "--file", fixture("programs/divide_fixed.py"), "--entry", "divide",
                             "--budget", "10", "--types", "int,int", "--interpreter", "python3 -S"});
  EXPECT_EQ(clean.code, cli::kExitOk) << clean.err;

  const auto setup = invoke({"fuzz-one", "--file", fixture("programs/import_failure.py"), "--entry", "target",
                             "--budget", "5", "--types", "int", "--interpreter", "python3 -S"});
  EXPECT_EQ(setup.code, cli::kExitSetupError);

  EXPECT_EQ(invoke({"fuzz-one", "--file", divide, "--entry", "divide"}).code, cli::kExitConfig);
  EXPECT_EQ(invoke({"fuzz-one", "--file", divide, "--entry", "divide", "--types", "int,tuple"}).code,
            cli::kExitConfig);
}

}  // namespace
}  // namespace autosafe
