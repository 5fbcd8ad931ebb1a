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

#include "autosafe/corpus.hpp"
#include "autosafe/python_source.hpp"
#include "autosafe/rng.hpp"
#include "test_support.hpp"

namespace autosafe {
namespace {

using testing::TempDir;
using testing::write_file;

TEST(LoadCorpus, TwoRecordsKeepFileOrder) {
  TempDir dir;
  auto path = dir.path() / "c.jsonl";
  write_file(path,
             R"({"id": "b", "prompt": "def g(x):\n    pass\n", "entry_point": "g"})"
             "\n\n"
             R"({"id": "a", "prompt": "def f():\n    pass\n", "entry_point": "f", "param_types": ["int", "list[str]"]})"
             "\n");
  Corpus c = load_corpus(path, CorpusFormat::kNative);
  ASSERT_EQ(c.tasks.size(), 2u);
  EXPECT_EQ(c.tasks[0].id, "b");
  EXPECT_EQ(c.tasks[1].id, "a");
  EXPECT_EQ(*c.tasks[1].param_types, (TypeSignature{FuzzKind::kInt, FuzzKind::kListText}));
  EXPECT_EQ(c.source_path, path.string());
}

TEST(LoadCorpus, MissingPromptNamesRecordIndex) {
  const std::string text =
      R"({"id": "ok", "prompt": "p", "entry_point": "f"})"
      "\n"
      R"({"id": "bad", "entry_point": "f"})"
      "\n";
  try {
    parse_corpus(text, CorpusFormat::kNative);
    FAIL() << "expected SchemaError";
  } catch (const SchemaError& e) {
    EXPECT_EQ(e.task_index(), 1u);
    EXPECT_EQ(e.field(), "prompt");
  }
}

TEST(LoadCorpus, EmptyFileIsAnEmptyCorpus) {
  TempDir dir;
  write_file(dir.path() / "e.jsonl", "");
  EXPECT_TRUE(load_corpus(dir.path() / "e.jsonl", CorpusFormat::kNative).tasks.empty());
  EXPECT_TRUE(parse_corpus("  \n\n", CorpusFormat::kNative).tasks.empty());
}

TEST(LoadCorpus, ErrorsAreLocated) {
  EXPECT_THROW(load_corpus("/nonexistent/corpus.jsonl", CorpusFormat::kNative), FileNotFound);
  try {
    parse_corpus("{\"id\": \"a\", \"prompt\": \"p\", \"entry_point\": \"f\"}\n{oops\n",
                 CorpusFormat::kNative);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
  EXPECT_THROW(parse_corpus("[1, 2]", CorpusFormat::kNative), ParseError);
  EXPECT_THROW(parse_corpus(R"({"id": "a", "prompt": "p", "entry_point": "f"})"
                            "\n"
                            R"({"id": "a", "prompt": "q", "entry_point": "g"})",
                            CorpusFormat::kNative),
               SchemaError);
  EXPECT_THROW(parse_corpus(R"({"id": "a", "prompt": "p", "entry_point": "3bad-name"})",
                            CorpusFormat::kNative),
               SchemaError);
  EXPECT_THROW(parse_corpus(R"({"id": "a", "prompt": "p", "entry_point": "f", "param_types": ["complex"]})",
                            CorpusFormat::kNative),
               SchemaError);
}

TEST(LoadCorpus, JsonArrayAndAdapters) {
  Corpus se = parse_corpus(
      R"([{"ID": "CWE-020_author_1.py", "Prompt": "import yaml\n\n\ndef helper():\n    pass\n\n\ndef yaml_load(filename):\n    '''Load a YAML file.'''\n", "Insecure_code": "x"}])",
      CorpusFormat::kSecurityEvalLike);
  ASSERT_EQ(se.tasks.size(), 1u);
  EXPECT_EQ(se.tasks[0].id, "CWE-020_author_1.py");
  EXPECT_EQ(se.tasks[0].entry_point, "yaml_load");
  EXPECT_EQ(se.tasks[0].extras["Insecure_code"], "x");

  Corpus he = parse_corpus(
      R"({"task_id": "HumanEval/0", "prompt": "def has_close(xs, t):\n    pass\n", "entry_point": "has_close", "test": "def check(candidate):\n    pass\n", "canonical_solution": "..."})",
      CorpusFormat::kHumanEvalLike);
  ASSERT_EQ(he.tasks.size(), 1u);
  EXPECT_EQ(he.tasks[0].id, "HumanEval/0");
  EXPECT_EQ(he.tasks[0].functional_tests.value(), "def check(candidate):\n    pass\n");
  EXPECT_TRUE(he.tasks[0].extras.contains("canonical_solution"));
}

TEST(ValidateTask, Basics) {
  TaskSpec ok = testing::task_of("f");
  EXPECT_TRUE(validate_task(ok).ok());

  TaskSpec bad = ok;
  bad.entry_point = "3bad-name";
  auto r = validate_task(bad);
  ASSERT_FALSE(r.ok());
  EXPECT_NE(r.violations[0].find("identifier"), std::string::npos);

  TaskSpec empty = ok;
  empty.prompt.clear();
  EXPECT_FALSE(validate_task(empty).ok());
}

// Ten hand-written prompts. The expected positional arity of each entry
// point comes from CPython's own parser, not from the library.
struct PromptCase {
  const char* entry;
  const char* prompt;
};

const PromptCase kPrompts[] = {
    {"read_file", "import os\n\n\ndef read_file(path):\n    '''Read a file under /srv/data.'''\n"},
    {"connect",
     "def connect(host: str, port: int = 22, *, timeout: float = 3.0) -> 'Conn':\n"
     "    \"\"\"Open an SSH connection.\"\"\"\n"},
    {"render",
     "def render(\n    template,  # jinja source, (not a param)\n    context: dict = {\"a\": (1, 2)},\n"
     "    /,\n    strict=False,\n):\n    \"\"\"Render a template.\"\"\"\n"},
    {"log", "def log(level, *messages, sep=' '):\n    '''Write messages.'''\n"},
    {"build", "def build(name, **options):\n    '''Build a package.'''\n"},
    {"handler",
     "from flask import Flask\napp = Flask(__name__)\n\n\n@app.route('/x', methods=['GET'])\n"
     "def handler(request, cb=lambda a, b: a + b):\n    '''Handle a request.'''\n"},
    {"get_secret", "def get_secret():\n    '''Return the secret.'''\n"},
    {"entry",
     "def helper(a, b, c):\n    return a\n\n\ndef entry(x, y):\n    '''Call helper safely.'''\n"},
    {"fmt", "def fmt(value, pattern=\"(%s, %s)\", width=10):\n    '''Format a pair.'''\n"},
    {"merge",
     "async def merge(a: dict[str, list[int]], b: 'tuple[int, int]', *rest) -> dict:\n"
     "    '''Merge two mappings.'''\n"},
};

std::vector<std::size_t> python_oracle_arities() {
  nlohmann::json cases = nlohmann::json::array();
  for (const auto& c : kPrompts) cases.push_back({{"entry", c.entry}, {"prompt", c.prompt}});
  const std::string output = testing::run_python(
      "import ast, json\n"
      "out = []\n"
      "for case in json.loads(" + nlohmann::json(cases.dump()).dump() + "):\n"
      "    tree = ast.parse(case['prompt'])\n"
      "    fns = [n for n in tree.body if isinstance(n, (ast.FunctionDef, ast.AsyncFunctionDef))\n"
      "           and n.name == case['entry']]\n"
      "    a = fns[-1].args\n"
      "    out.append(len(a.posonlyargs) + len(a.args))\n"
      "print(json.dumps(out))\n");
  return nlohmann::json::parse(output).get<std::vector<std::size_t>>();
}

TEST(ValidateTask, StrictArityAgreesWithInterpreterOracle) {
  const auto oracle = python_oracle_arities();
  ASSERT_EQ(oracle.size(), std::size(kPrompts));
  for (std::size_t i = 0; i < oracle.size(); ++i) {
    SCOPED_TRACE(kPrompts[i].entry);
    EXPECT_EQ(python::positional_arity(kPrompts[i].prompt, kPrompts[i].entry), oracle[i]);

    TaskSpec task;
    task.id = "t";
    task.prompt = kPrompts[i].prompt;
    task.entry_point = kPrompts[i].entry;
    task.param_types = TypeSignature(oracle[i], FuzzKind::kInt);
    EXPECT_TRUE(validate_task(task, {.strict = true}).ok());
    task.param_types->push_back(FuzzKind::kStr);
    EXPECT_FALSE(validate_task(task, {.strict = true}).ok());
    // Lenient mode never looks at the signature.
    EXPECT_TRUE(validate_task(task).ok());
  }
}

// --- round-trip property ---------------------------------------------------

std::string random_text(Rng& rng) {
  static const std::vector<std::string> pieces = {
      "a", "Z", "_", " ", "\n", "\t", "\"", "\\", "'", "{", "}", "é", "日本", "😀", "\x01", "def ",
      "():", "#", "/"};
  std::string s;
  const auto n = rng.below(24);
  for (std::uint64_t i = 0; i < n; ++i) s += pieces[rng.below(pieces.size())];
  return s;
}

std::string random_identifier(Rng& rng) {
  static const char head[] = "abcxyz_ABC";
  static const char tail[] = "abcxyz_ABC0129";
  std::string s(1, head[rng.below(sizeof head - 1)]);
  const auto n = rng.below(8);
  for (std::uint64_t i = 0; i < n; ++i) s += tail[rng.below(sizeof tail - 1)];
  return python::is_keyword(s) ? s + "_" : s;
}

nlohmann::json random_extra(Rng& rng) {
  switch (rng.below(5)) {
    case 0:
      return rng.between(-1000000, 1000000);
    case 1:
      return rng.unit() * 1e6 - 5e5;
    case 2:
      return random_text(rng);
    case 3:
      return nlohmann::json::array({rng.coin(), nullptr, random_text(rng)});
    default:
      return nlohmann::json{{"nested", random_text(rng)}};
  }
}

TaskSpec random_task(Rng& rng, std::size_t index) {
  TaskSpec t;
  t.id = "task-" + std::to_string(index) + random_text(rng);
  t.prompt = "p" + random_text(rng);
  t.entry_point = random_identifier(rng);
  if (rng.coin()) {
    TypeSignature sig;
    const auto n = rng.below(4);
    for (std::uint64_t i = 0; i < n; ++i) sig.push_back(static_cast<FuzzKind>(rng.below(8)));
    t.param_types = sig;
  }
  if (rng.coin()) t.setup_imports = std::vector<std::string>{random_identifier(rng)};
  if (rng.coin()) t.functional_tests = random_text(rng);
  const auto extras = rng.below(3);
  for (std::uint64_t i = 0; i < extras; ++i) t.extras["x_" + random_identifier(rng)] = random_extra(rng);
  return t;
}

TEST(CorpusProperty, NativeRoundTripIsIdentity) {
  Rng rng(20260101);
  for (int trial = 0; trial < 300; ++trial) {
    Corpus c;
    c.format = CorpusFormat::kNative;
    const auto n = rng.below(6);
    for (std::uint64_t i = 0; i < n; ++i) c.tasks.push_back(random_task(rng, i));
    const std::string text = serialize_native(c);
    Corpus back = parse_corpus(text, CorpusFormat::kNative);
    ASSERT_EQ(back.tasks, c.tasks) << text;
    ASSERT_EQ(serialize_native(back), text);
  }
}

TEST(CorpusProperty, LoadedTasksSatisfyInvariants) {
  Rng rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    Corpus c;
    const auto n = 1 + rng.below(5);
    for (std::uint64_t i = 0; i < n; ++i) c.tasks.push_back(random_task(rng, i));
    // Break one record now and then; loading must then fail with a location.
    std::string text = serialize_native(c);
    const bool corrupt = rng.chance(1, 3);
    if (corrupt) {
      const auto pos = text.find("\"prompt\"");
      text.replace(pos, 8, "\"prompx\"");
    }
    try {
      Corpus back = parse_corpus(text, CorpusFormat::kNative);
      EXPECT_FALSE(corrupt);
      for (const auto& t : back.tasks) EXPECT_TRUE(validate_task(t).ok());
    } catch (const SchemaError& e) {
      EXPECT_TRUE(corrupt);
      EXPECT_EQ(e.task_index(), 0u);
    }
  }
}

}  // namespace
}  // namespace autosafe
