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

#include "autosafe/fuzzing_agent.hpp"
#include "autosafe/python_source.hpp"
#include "test_support.hpp"

namespace autosafe {
namespace {

using testing::code_of;
using testing::program;
using testing::task_of;
using testing::tuple_of;

Sandbox fast_sandbox() {
  SandboxConfig c;
  c.interpreter_cmd = testing::fast_interpreter();
  c.timeout = std::chrono::milliseconds(2000);
  return Sandbox(c);
}

InputTuple ints(std::initializer_list<std::int64_t> xs) {
  std::vector<FuzzValue> v;
  for (auto x : xs) v.push_back(FuzzValue::Int(x));
  return tuple_of(v);
}

const TypeSignature kTwoInts = {FuzzKind::kInt, FuzzKind::kInt};

TEST(Fuzz, RunsEverySeedThenExactlyTheBudget) {
  const Sandbox sb = fast_sandbox();
  const std::vector<InputTuple> seeds = {
      tuple_of({FuzzValue::Int(1), FuzzValue::Str("a"), FuzzValue::Bool(true)}),
      tuple_of({FuzzValue::Int(-9), FuzzValue::Str(""), FuzzValue::Bool(false)}),
      tuple_of({FuzzValue::Int(70), FuzzValue::Str("xyz"), FuzzValue::Bool(true)}),
  };
  Rng rng(1);
  const auto out = fuzz(sb, code_of(program("robust.py")), task_of("robust"), seeds, 150, rng);
  EXPECT_EQ(out.executions_run, 153u);
  EXPECT_EQ(out.seeds_used, 3u);
  EXPECT_TRUE(out.clean);
  EXPECT_TRUE(out.crashes.empty());
  EXPECT_FALSE(out.setup_error);
}

TEST(Fuzz, CrashingSeedIsReportedAtIterationZero) {
  Rng rng(2);
  const std::vector<InputTuple> seeds = {ints({4, 2}), ints({4, 0})};
  const auto out = fuzz(fast_sandbox(), code_of(program("divide.py")), task_of("divide", kTwoInts),
                        seeds, 10, rng);
  EXPECT_EQ(out.executions_run, 12u);
  EXPECT_FALSE(out.clean);
  ASSERT_FALSE(out.crashes.empty());
  const auto& c = out.crashes.front();
  EXPECT_EQ(c.iteration_found, 0u);
  EXPECT_EQ(c.input.values, ints({4, 0}).values);
  EXPECT_EQ(c.classification, Classification::kCrash);
  EXPECT_EQ(c.error_class, "ZeroDivisionError");
  EXPECT_EQ(c.error_message, "ZeroDivisionError: division by zero");
  EXPECT_EQ(c.top_frame, "File \"<candidate>\", line 2, in divide");
}

TEST(Fuzz, CrashesAreDeduplicatedByClassAndFrame) {
  // Every input crashes the same way.
  Rng rng(3);
  const std::vector<InputTuple> seeds = {ints({1, 0}), ints({2, 0})};
  const auto out = fuzz(fast_sandbox(), code_of("def divide(a, b):\n    return a / 0\n"),
                        task_of("divide", kTwoInts), seeds, 8, rng);
  EXPECT_EQ(out.executions_run, 10u);
  ASSERT_EQ(out.crashes.size(), 1u);
  EXPECT_EQ(out.crashes[0].input.values, ints({1, 0}).values);
}

TEST(Fuzz, SetupErrorStopsTheLoop) {
  Rng rng(4);
  const std::vector<InputTuple> seeds = {ints({1}), ints({2})};
  const auto out = fuzz(fast_sandbox(), code_of(program("import_failure.py")), task_of("target"), seeds, 50, rng);
  EXPECT_TRUE(out.setup_error);
  EXPECT_FALSE(out.clean);
  EXPECT_EQ(out.executions_run, 1u);
  EXPECT_NE(out.setup_detail.find("ModuleNotFoundError"), std::string::npos);
}

TEST(Fuzz, MissingEntryPointIsSetupErrorWithoutExecuting) {
  Rng rng(4);
  const std::vector<InputTuple> seeds = {ints({1})};
  const auto out = fuzz(fast_sandbox(), code_of("def other(x):\n    return x\n"), task_of("target"), seeds, 5, rng);
  EXPECT_TRUE(out.setup_error);
  EXPECT_EQ(out.executions_run, 0u);
}

TEST(Fuzz, ZeroArityRunsOnce) {
  Rng rng(5);
  const std::vector<InputTuple> seeds = {InputTuple{}};
  const auto out = fuzz(fast_sandbox(), code_of("def f():\n    return 1\n"), task_of("f"), seeds, 150, rng);
  EXPECT_EQ(out.executions_run, 1u);
  EXPECT_TRUE(out.clean);
}

TEST(Fuzz, TimeoutsAreCrashReports) {
  Rng rng(6);
  const std::vector<InputTuple> seeds = {ints({1})};
  SandboxConfig c;
  c.interpreter_cmd = testing::fast_interpreter();
  c.timeout = std::chrono::milliseconds(300);
  const auto out = fuzz(Sandbox(c), code_of(program("infinite_loop.py")), task_of("target"), seeds, 2, rng);
  EXPECT_EQ(out.executions_run, 3u);
  ASSERT_EQ(out.crashes.size(), 1u);
  EXPECT_EQ(out.crashes[0].classification, Classification::kTimeout);
  EXPECT_EQ(out.crashes[0].error_class, "timeout");
}

TEST(Fuzz, SameSeedSameOutcome) {
  const Sandbox sb = fast_sandbox();
  const std::vector<InputTuple> seeds = {ints({3, 1}), ints({-2, 5})};
  Rng a(99), b(99);
  const auto x = fuzz(sb, code_of(program("divide.py")), task_of("divide", kTwoInts), seeds, 30, a);
  const auto y = fuzz(sb, code_of(program("divide.py")), task_of("divide", kTwoInts), seeds, 30, b);
  EXPECT_EQ(x, y);
}

TEST(Regression, ConjunctionOverEveryFailingInput) {
  const Sandbox sb = fast_sandbox();
  const TaskSpec task = task_of("divide", kTwoInts);
  const std::vector<InputTuple> failing = {ints({4, 0}), ints({-3, 0})};
  EXPECT_TRUE(regression_check(sb, code_of(program("divide_fixed.py")), task, failing));
  EXPECT_FALSE(regression_check(sb, code_of(program("divide.py")), task, failing));

  const auto partial = run_regression(sb, code_of(program("divide_partial.py")), task, failing);
  EXPECT_FALSE(partial.passed);
  ASSERT_EQ(partial.still_failing.size(), 1u);
  EXPECT_EQ(partial.still_failing[0].input.values, ints({-3, 0}).values);

  const std::vector<InputTuple> only_positive = {ints({4, 0})};
  EXPECT_TRUE(regression_check(sb, code_of(program("divide_partial.py")), task, only_positive));

  const auto broken = run_regression(sb, code_of("def divide(a, b):\n    return (\n"), task, failing);
  EXPECT_FALSE(broken.passed);
  EXPECT_TRUE(broken.setup_error);
}

// --- fuzz-fix loop -------------------------------------------------------------

struct FixScript {
  std::vector<std::string> sources;
  std::size_t asked = 0;

  std::shared_ptr<ChatBackend> backend() {
    return std::make_shared<MockBackend>([this](const ChatRequest&) {
      const std::string& s = sources[std::min(asked, sources.size() - 1)];
      ++asked;
      return "```python\n" + s + "```";
    });
  }
};

FuzzLoopResult run_loop(FixScript& script, const std::string& initial, int max_rounds = 3,
                        std::vector<InputTuple> seeds = {ints({10, 2}), ints({4, 0}), ints({7, 7})},
                        std::size_t budget = 20) {
  LlmClient client(script.backend());
  const auto lib = PromptLibrary::builtin();
  CodingAgent coder(client, lib, {});
  Rng rng(7);
  return fuzz_fix_loop(fast_sandbox(), code_of(initial), task_of("divide", kTwoInts), seeds,
                       {budget, max_rounds}, coder, rng);
}

TEST(FuzzFixLoop, CleanFirstFuzzIsNoCrash) {
  FixScript script{{program("divide_fixed.py")}};
  const auto r = run_loop(script, program("divide_fixed.py"));
  EXPECT_EQ(r.trace.status, FuzzStatus::kNoCrash);
  EXPECT_EQ(r.trace.rounds_used, 0);
  EXPECT_EQ(script.asked, 0u);
  ASSERT_EQ(r.trace.rounds.size(), 1u);
  EXPECT_EQ(r.trace.rounds[0].outcome->executions_run, 23u);
}

TEST(FuzzFixLoop, RevisionPassingRegressionAndRefuzzIsFixed) {
  FixScript script{{program("divide_fixed.py")}};
  const auto r = run_loop(script, program("divide.py"));
  EXPECT_EQ(r.trace.status, FuzzStatus::kFixed);
  EXPECT_EQ(r.trace.rounds_used, 1);
  ASSERT_EQ(r.trace.rounds.size(), 2u);
  EXPECT_EQ(r.trace.rounds[1].regression_passed, true);
  EXPECT_TRUE(r.trace.rounds[1].outcome->clean);
  EXPECT_EQ(r.code.version, 1);
  EXPECT_EQ(r.code.provenance, (Provenance{ProvenanceKind::kFuzzFix, 1}));
}

TEST(FuzzFixLoop, NeverFixedStopsAtTheBound) {
  FixScript script{{program("divide.py")}};
  const auto r = run_loop(script, program("divide.py"));
  EXPECT_EQ(r.trace.status, FuzzStatus::kUnfixed);
  EXPECT_EQ(r.trace.rounds_used, 3);
  EXPECT_EQ(script.asked, 3u);
  ASSERT_EQ(r.trace.rounds.size(), 4u);
  for (int i = 1; i <= 3; ++i) {
    EXPECT_EQ(r.trace.rounds[i].regression_passed, false);
    // A failed regression skips the re-fuzz.
    EXPECT_FALSE(r.trace.rounds[i].outcome.has_value());
  }
  EXPECT_EQ(r.code.version, 3);
}

TEST(FuzzFixLoop, PartialFixFoundByRefuzzThenCompleted) {
  // The first revision guards only the seed that crashed; every negative
  // mutant of 0 still fails, so the re-fuzz must catch it.
  FixScript script{{"def f(x):\n    if x == 0:\n        return 0.0\n    return 1 / x if x > 0 else int('neg')\n",
                    "def f(x):\n    return 0.0 if x <= 0 else 1 / x\n"}};
  LlmClient client(script.backend());
  const auto lib = PromptLibrary::builtin();
  CodingAgent coder(client, lib, {});
  Rng rng(7);
  const std::vector<InputTuple> seeds = {ints({0})};
  const auto r = fuzz_fix_loop(fast_sandbox(), code_of("def f(x):\n    return 1 / x\n"),
                               task_of("f", TypeSignature{FuzzKind::kInt}), seeds, {20, 3}, coder, rng);
  ASSERT_EQ(r.trace.rounds.size(), 3u);
  EXPECT_EQ(r.trace.rounds[1].regression_passed, true);
  ASSERT_TRUE(r.trace.rounds[1].outcome.has_value());
  ASSERT_FALSE(r.trace.rounds[1].outcome->clean);
  EXPECT_EQ(r.trace.rounds[1].outcome->crashes[0].error_class, "ValueError");
  EXPECT_EQ(r.trace.rounds[2].regression_passed, true);
  EXPECT_EQ(r.trace.status, FuzzStatus::kFixed);
  EXPECT_EQ(r.trace.rounds_used, 2);
  EXPECT_EQ(r.code.version, 2);
}

TEST(FuzzFixLoop, SetupErrorInRevisionEndsTheLoop) {
  FixScript script{{"def divide(a, b):\n    return (\n"}};
  const auto r = run_loop(script, program("divide.py"));
  EXPECT_EQ(r.trace.status, FuzzStatus::kSetupError);
  EXPECT_EQ(r.trace.rounds_used, 1);
}

TEST(FuzzFixLoop, ZeroRoundsLeavesCrashesUnfixed) {
  FixScript script{{program("divide_fixed.py")}};
  const auto r = run_loop(script, program("divide.py"), 0);
  EXPECT_EQ(r.trace.status, FuzzStatus::kUnfixed);
  EXPECT_EQ(script.asked, 0u);
}

// --- seeds ---------------------------------------------------------------------

TEST(ParseSeedReply, TypedFiltering) {
  const auto set = parse_seed_reply("Seeds:\n```json\n[[1, 2], [1.5, 2], [3], [\"a\", 1], [4, 5]]\n```",
                                    kTwoInts);
  ASSERT_EQ(set.seeds.size(), 2u);
  EXPECT_EQ(set.seeds[0].values, ints({1, 2}).values);
  EXPECT_EQ(set.seeds[1].values, ints({4, 5}).values);
  EXPECT_EQ(set.rejected, 3u);
}

TEST(ParseSeedReply, IntWidensToFloat) {
  const auto set = parse_seed_reply("[[1, 2.5]]", TypeSignature{FuzzKind::kFloat, FuzzKind::kFloat});
  ASSERT_EQ(set.seeds.size(), 1u);
  EXPECT_EQ(set.seeds[0].values[0], FuzzValue::Float(1.0));
}

TEST(ParseSeedReply, UntypedUnifiesOnTheFirstEntry) {
  const auto set = parse_seed_reply("[[\"x\", [1]], [\"y\", []], [1, [2]], [\"z\"]]", std::nullopt);
  ASSERT_EQ(set.seeds.size(), 2u);
  EXPECT_EQ(set.seeds[1].values[1].kind(), FuzzKind::kListNumeric);
  EXPECT_EQ(set.rejected, 2u);
}

TEST(ParseSeedReply, GarbageYieldsNothing) {
  for (const char* reply : {"", "no seeds today", "[1, 2]", "{\"a\": [1]}", "[[null]]", "[[1], [2"}) {
    EXPECT_TRUE(parse_seed_reply(reply, kTwoInts).seeds.empty()) << reply;
  }
}

TEST(DefaultSeed, ZeroValues) {
  const auto t = default_seed({FuzzKind::kInt, FuzzKind::kStr, FuzzKind::kBool, FuzzKind::kDictText});
  EXPECT_EQ(encode_args(t), "[0,\"\",false,{}]");
}

struct SeedHarness {
  std::string reply;
  std::vector<ChatRequest> requests;
  SeedSet run(const TaskSpec& task, std::optional<std::size_t> arity = {}) {
    LlmClient client(std::make_shared<MockBackend>([this](const ChatRequest& r) {
      requests.push_back(r);
      return reply;
    }));
    const auto lib = PromptLibrary::builtin();
    FuzzingAgent agent(client, lib, {}, 4);
    return agent.generate_seeds(task, arity);
  }
};

TEST(GenerateSeeds, PromptCarriesTypesAndCount) {
  SeedHarness h{"[[1, 2]]", {}};
  const auto set = h.run(task_of("divide", kTwoInts));
  EXPECT_EQ(set.seeds.size(), 1u);
  EXPECT_FALSE(set.from_fallback);
  ASSERT_EQ(h.requests.size(), 1u);
  const auto& prompt = h.requests[0].messages.back().content;
  EXPECT_NE(prompt.find("int, int"), std::string::npos);
  EXPECT_NE(prompt.find('4'), std::string::npos);
  EXPECT_EQ(h.requests[0].template_id, TemplateId::kSeedGen);
}

TEST(GenerateSeeds, FallsBackToDefaultsWhenTyped) {
  SeedHarness h{"I cannot help with that.", {}};
  const auto set = h.run(task_of("divide", kTwoInts));
  EXPECT_TRUE(set.from_fallback);
  ASSERT_EQ(set.seeds.size(), 1u);
  EXPECT_EQ(set.seeds[0].values, ints({0, 0}).values);
}

TEST(GenerateSeeds, NoSeedsAndNoTypesThrows) {
  SeedHarness h{"nothing", {}};
  EXPECT_THROW(h.run(task_of("divide")), NoTypesAvailable);
}

TEST(GenerateSeeds, ZeroAritySkipsTheModel) {
  SeedHarness h{"[[1]]", {}};
  const auto set = h.run(task_of("f"), 0);
  ASSERT_EQ(set.seeds.size(), 1u);
  EXPECT_EQ(set.seeds[0].arity(), 0u);
  EXPECT_TRUE(h.requests.empty());
}

// --- traceback parsing ------------------------------------------------------------

TEST(ParseTraceback, ChainedExceptionUsesTheLastOne) {
  const std::string tail =
      "Traceback (most recent call last):\n"
      "  File \"<candidate>\", line 3, in f\n"
      "    return d[k]\n"
      "KeyError: 'k'\n"
      "\n"
      "During handling of the above exception, another exception occurred:\n"
      "\n"
      "Traceback (most recent call last):\n"
      "  File \"<candidate>\", line 5, in f\n"
      "    raise ValueError('bad\\nkey')\n"
      "  File \"<candidate>\", line 9, in helper\n"
      "    raise ValueError(msg)\n"
      "ValueError: first line\n"
      "second line\n";
  const auto tb = parse_traceback(tail);
  EXPECT_EQ(tb.error_class, "ValueError");
  EXPECT_EQ(tb.error_message, "ValueError: first line\nsecond line");
  EXPECT_EQ(tb.top_frame, "File \"<candidate>\", line 9, in helper");
}

TEST(ParseTraceback, QualifiedClassAndBareMessage) {
  auto tb = parse_traceback("Traceback (most recent call last):\n  File \"x\", line 1, in f\n    g()\n"
                            "json.decoder.JSONDecodeError: Expecting value: line 1 column 1 (char 0)\n");
  EXPECT_EQ(tb.error_class, "json.decoder.JSONDecodeError");
  tb = parse_traceback("Traceback (most recent call last):\n  File \"x\", line 1, in f\nStopIteration\n");
  EXPECT_EQ(tb.error_class, "StopIteration");
  EXPECT_EQ(tb.error_message, "StopIteration");
  tb = parse_traceback("");
  EXPECT_EQ(tb.error_class, "");
}

TEST(MakeCrashReport, SignalWithoutTraceback) {
  ExecutionResult r;
  r.classification = Classification::kCrash;
  r.exit_code = -11;
  const auto report = make_crash_report(r, 5);
  EXPECT_EQ(report.error_class, "signal 11");
  EXPECT_EQ(report.iteration_found, 5u);
  r.classification = Classification::kOk;
  EXPECT_THROW(make_crash_report(r, 0), ContractViolation);
}

TEST(FuzzStatusNames, RoundTrip) {
  for (auto s : {FuzzStatus::kNoCrash, FuzzStatus::kFixed, FuzzStatus::kUnfixed, FuzzStatus::kSetupError}) {
    EXPECT_EQ(parse_fuzz_status(to_string(s)), s);
  }
}

}  // namespace
}  // namespace autosafe
