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

#include "autosafe/sandbox.hpp"
#include "test_support.hpp"

namespace autosafe {
namespace {

using namespace std::chrono_literals;

// Drives the rendered harness through raw stdin, the way any other runner
// would: a JSON array of positional arguments in, an exit code out.
class HarnessTest : public ::testing::Test {
 protected:
  ExecutionResult run(const std::string& candidate, const std::string& stdin_text,
                      const std::string& entry = "f") {
    ProgramBundle b;
    b.source = render_harness(candidate, entry, HarnessMode::kFuzz);
    b.entry_point = entry;
    return sandbox_.execute_raw(b, stdin_text, 5s);
  }

  static std::string last_line(const std::string& text) {
    std::string t = text;
    while (!t.empty() && t.back() == '\n') t.pop_back();
    return t.substr(t.rfind('\n') + 1);
  }

  Sandbox sandbox_{SandboxConfig{testing::fast_interpreter(), kDefaultExecTimeout, {}, {}}};
};

TEST_F(HarnessTest, ExitZeroOnNormalReturn) {
  EXPECT_EQ(run("def f(a, b):\n    return a + b\n", "[1, 2]").exit_code, 0);
  EXPECT_EQ(run("def f():\n    return None\n", "[]").exit_code, 0);
  EXPECT_EQ(run("def f(*xs):\n    return xs\n", " [1, \"a\", [], {}] \n").exit_code, 0);
}

TEST_F(HarnessTest, ArgumentsArriveWithJsonTypes) {
  const std::string f =
      "def f(i, x, s, b, l, d):\n"
      "    assert type(i) is int and i == -3\n"
      "    assert type(x) is float and x == 2.0\n"
      "    assert s == 'a\"b\\n\\u00e9'\n"
      "    assert b is True\n"
      "    assert l == [1, 0.5]\n"
      "    assert d == {'k': 'v'}\n";
  const auto r = run(f, R"([-3, 2.0, "a\"b\n\u00e9", true, [1, 0.5], {"k": "v"}])");
  EXPECT_EQ(r.exit_code, 0) << r.stderr_tail;
}

TEST_F(HarnessTest, ExitOneWithTracebackNamingTheClass) {
  const auto r = run("def f(d):\n    return d['missing']\n", "[{}]");
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_EQ(last_line(r.stderr_tail), "KeyError: 'missing'");
  EXPECT_NE(r.stderr_tail.find("File \"<candidate>\", line 2, in f"), std::string::npos);
  // The harness's own frame is not part of the report.
  EXPECT_EQ(r.stderr_tail.find("in main"), std::string::npos);

  const auto custom = run("class Boom(Exception):\n    pass\n\ndef f():\n    raise Boom('x')\n", "[]");
  EXPECT_EQ(custom.exit_code, 1);
  EXPECT_EQ(last_line(custom.stderr_tail), "candidate.Boom: x");
}

TEST_F(HarnessTest, NonzeroSystemExitIsACrash) {
  EXPECT_EQ(run("import sys\ndef f():\n    sys.exit(3)\n", "[]").exit_code, 1);
  EXPECT_EQ(run("import sys\ndef f():\n    sys.exit(0)\n", "[]").exit_code, 0);
}

TEST_F(HarnessTest, ExitTwoOnSetupProblems) {
  const std::string ok = "def f(a):\n    return a\n";
  EXPECT_EQ(run(ok, "not json").exit_code, 2);
  EXPECT_EQ(run(ok, "{\"a\": 1}").exit_code, 2);
  EXPECT_EQ(run(ok, "[1] [2]").exit_code, 2);
  EXPECT_EQ(run(ok, "[NaN]").exit_code, 2);
  EXPECT_EQ(run(ok, "").exit_code, 2);
  EXPECT_EQ(run(ok, "[1, 2]").exit_code, 2);
  EXPECT_EQ(run(ok, "[]").exit_code, 2);
  EXPECT_EQ(run(ok, "[1]", "g").exit_code, 2);
  EXPECT_EQ(run("def f(a):\n    return (\n", "[1]").exit_code, 2);
  EXPECT_EQ(run("raise RuntimeError('at import')\ndef f():\n    pass\n", "[]").exit_code, 2);
  EXPECT_EQ(run("def f(a, *, key):\n    return a\n", "[1]").exit_code, 2);
  EXPECT_EQ(run("f = 3\n", "[]").exit_code, 2);
}

TEST_F(HarnessTest, DefaultsAndVarargsAcceptMatchingArity) {
  EXPECT_EQ(run("def f(a, b=1, *rest, key=2):\n    return a\n", "[1]").exit_code, 0);
  EXPECT_EQ(run("def f(a, b=1, *rest, key=2):\n    return a\n", "[1, 2, 3, 4]").exit_code, 0);
  EXPECT_EQ(run("def f(a, b=1):\n    return a\n", "[1, 2, 3]").exit_code, 2);
}

TEST_F(HarnessTest, CandidateSourceIsEmbeddedVerbatim) {
  // Quotes, backslashes and braces that would break naive templating.
  const std::string tricky = "def f():\n    return '{{entry_point}} \\\\ \"\"\" \\'\\''\n";
  EXPECT_EQ(run(tricky, "[]").exit_code, 0);
}

}  // namespace
}  // namespace autosafe
