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

#include "autosafe/rng.hpp"
#include "autosafe/static_agent.hpp"
#include "test_support.hpp"

namespace autosafe {
namespace {

using testing::code_of;
using testing::task_of;

const char* kInsecure =
    R"({"secure": false, "findings": [{"cwe_id": "CWE-89", "description": "string-built SQL", "remediation": "use parameters"}]})";
const char* kSecure = R"({"secure": true, "findings": []})";

TEST(ParseVerdict, SecureAndInsecure) {
  StaticVerdict v = parse_verdict(kSecure);
  EXPECT_TRUE(v.secure);
  EXPECT_TRUE(v.findings.empty());
  EXPECT_EQ(v.raw_reply, kSecure);

  v = parse_verdict(kInsecure);
  EXPECT_FALSE(v.secure);
  ASSERT_EQ(v.findings.size(), 1u);
  EXPECT_EQ(v.findings[0], (Finding{"CWE-89", "string-built SQL", "use parameters"}));
}

TEST(ParseVerdict, FindsObjectInsideProseOrFence) {
  EXPECT_TRUE(parse_verdict(std::string("Analysis done.\n```json\n") + kSecure + "\n```\nThanks").secure);
  EXPECT_FALSE(parse_verdict(std::string("{not json} then ") + kInsecure).secure);
  // Unknown keys are ignored.
  EXPECT_TRUE(parse_verdict(R"({"secure": true, "findings": [], "confidence": 0.9})").secure);
}

TEST(ParseVerdict, RejectsMalformedVerdicts) {
  const char* bad[] = {
      "SECURE",
      R"({"secure": "yes", "findings": []})",
      R"({"secure": true})",
      R"({"secure": true, "findings": {}})",
      R"({"secure": true, "findings": [{"cwe_id": "CWE-1", "description": "d", "remediation": "r"}]})",
      R"({"secure": false, "findings": []})",
      R"({"secure": false, "findings": [{"cwe_id": "89", "description": "d", "remediation": "r"}]})",
      R"({"secure": false, "findings": [{"cwe_id": "CWE-89", "description": "d"}]})",
      R"({"secure": false, "findings": ["CWE-89"]})",
  };
  for (const char* reply : bad) {
    try {
      parse_verdict(reply);
      ADD_FAILURE() << reply;
    } catch (const VerdictParseError& e) {
      EXPECT_EQ(e.raw_reply(), reply);
    }
  }
}

TEST(IsCweId, Form) {
  EXPECT_TRUE(is_cwe_id("CWE-79"));
  EXPECT_TRUE(is_cwe_id("CWE-1333"));
  EXPECT_FALSE(is_cwe_id("CWE-"));
  EXPECT_FALSE(is_cwe_id("cwe-79"));
  EXPECT_FALSE(is_cwe_id("CWE-79a"));
  EXPECT_FALSE(is_cwe_id("CVE-2021-1"));
}

// A reviewer that reports `insecure_verdicts` insecure verdicts before the
// first secure one, and a coder that always answers with a new version.
struct ScriptedLoop {
  int insecure_verdicts = 0;
  int analyses = 0;
  int fixes = 0;
  std::string bad_reply;  // when set, returned on analysis number bad_at
  int bad_at = -1;

  std::shared_ptr<ChatBackend> backend() {
    return std::make_shared<MockBackend>([this](const ChatRequest& r) -> std::string {
      if (r.template_id == TemplateId::kStaticAnalyze) {
        const int n = analyses++;
        if (n == bad_at) return bad_reply;
        return n < insecure_verdicts ? kInsecure : kSecure;
      }
      ++fixes;
      return "```python\ndef f():\n    return " + std::to_string(fixes) + "\n```";
    });
  }
};

struct LoopRun {
  ScriptedLoop script;
  StaticLoopResult result;
};

LoopRun run_loop(int insecure, int max_rounds, int bad_at = -1) {
  LoopRun run;
  run.script.insecure_verdicts = insecure;
  run.script.bad_at = bad_at;
  run.script.bad_reply = "I think it is fine.";
  LlmClient client(run.script.backend());
  const auto lib = PromptLibrary::builtin();
  StaticAgent analyzer(client, lib, {});
  CodingAgent coder(client, lib, {});
  run.result = static_loop(task_of("f"), code_of("def f():\n    return 0\n"), max_rounds, analyzer, coder);
  return run;
}

TEST(StaticLoop, AlwaysInsecureStopsAtTheBound) {
  const LoopRun run = run_loop(1000, 4);
  EXPECT_EQ(run.script.fixes, 4);
  EXPECT_EQ(run.script.analyses, 5);
  EXPECT_FALSE(run.result.trace.resolved);
  EXPECT_EQ(run.result.trace.rounds_used, 4);
  EXPECT_EQ(run.result.trace.verdicts.size(), 5u);
  EXPECT_EQ(run.result.trace.final_version, 4);
  EXPECT_EQ(run.result.code.version, 4);
}

TEST(StaticLoop, SecureOnFirstAnalysis) {
  const LoopRun run = run_loop(0, 4);
  EXPECT_EQ(run.script.fixes, 0);
  EXPECT_EQ(run.script.analyses, 1);
  EXPECT_TRUE(run.result.trace.resolved);
  EXPECT_EQ(run.result.code.version, 0);
  EXPECT_TRUE(run.result.revisions.empty());
}

TEST(StaticLoop, ZeroRoundsOnlyAnalyzes) {
  const LoopRun run = run_loop(1, 0);
  EXPECT_EQ(run.script.fixes, 0);
  EXPECT_EQ(run.script.analyses, 1);
  EXPECT_FALSE(run.result.trace.resolved);
}

TEST(StaticLoop, ParseFailureEndsTheLoopUnresolved) {
  const LoopRun run = run_loop(1000, 4, 2);
  EXPECT_EQ(run.script.analyses, 3);
  EXPECT_EQ(run.script.fixes, 2);
  EXPECT_FALSE(run.result.trace.resolved);
  ASSERT_TRUE(run.result.trace.parse_failure.has_value());
  EXPECT_EQ(run.result.trace.parse_failure_reply, "I think it is fine.");
  EXPECT_EQ(run.result.trace.verdicts.size(), 2u);
  EXPECT_EQ(run.result.code.version, 2);
}

TEST(StaticLoop, NegativeBoundIsAContractViolation) {
  ScriptedLoop script;
  LlmClient client(script.backend());
  const auto lib = PromptLibrary::builtin();
  StaticAgent analyzer(client, lib, {});
  CodingAgent coder(client, lib, {});
  EXPECT_THROW(static_loop(task_of("f"), code_of("x = 1\n"), -1, analyzer, coder), ContractViolation);
}

// For any reviewer behaviour and bound: analyses = fixes + 1 unless resolved
// early, fixes never exceed the bound, and versions count up by one.
TEST(StaticLoopProperty, BoundsAndVersionChain) {
  Rng rng(2024);
  for (int trial = 0; trial < 300; ++trial) {
    const int insecure = static_cast<int>(rng.below(8));
    const int max_rounds = static_cast<int>(rng.below(7));
    const LoopRun run = run_loop(insecure, max_rounds);
    const auto& tr = run.result.trace;
    const int expected_fixes = std::min(insecure, max_rounds);
    ASSERT_EQ(run.script.fixes, expected_fixes);
    ASSERT_EQ(run.script.analyses, expected_fixes + 1);
    ASSERT_EQ(tr.resolved, insecure <= max_rounds);
    ASSERT_EQ(tr.rounds_used, expected_fixes);
    ASSERT_EQ(static_cast<int>(run.result.revisions.size()), expected_fixes);
    for (std::size_t i = 0; i < run.result.revisions.size(); ++i) {
      const auto& rev = run.result.revisions[i];
      ASSERT_EQ(rev.version, static_cast<int>(i) + 1);
      ASSERT_EQ(rev.provenance, (Provenance{ProvenanceKind::kStaticFix, static_cast<int>(i) + 1}));
    }
    for (std::size_t i = 0; i < tr.verdicts.size(); ++i) {
      ASSERT_EQ(tr.verdicts[i].secure, static_cast<int>(i) >= insecure);
    }
  }
}

}  // namespace
}  // namespace autosafe
