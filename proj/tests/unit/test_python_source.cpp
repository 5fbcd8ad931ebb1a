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

#include "autosafe/python_source.hpp"

namespace autosafe::python {
namespace {

TEST(ExtractFunction, KeepsImportsTheFunctionUses) {
  const std::string src =
      "import os\n"
      "import sys\n"
      "\n"
      "def read(path):\n"
      "    return os.path.exists(path)\n";
  FunctionSlice s = extract_function(src, "read");
  EXPECT_EQ(s.source, "import os\n\ndef read(path):\n    return os.path.exists(path)\n");
  EXPECT_EQ(s.entry_first_line, 4u);
}

TEST(ExtractFunction, MissingEntryPoint) {
  EXPECT_THROW(extract_function("def f():\n    pass\n", "g"), EntryPointNotFound);
  EXPECT_THROW(extract_function("", "g"), EntryPointNotFound);
}

TEST(ExtractFunction, LastDefinitionWins) {
  const std::string src =
      "def f(x):\n    return 1\n\n"
      "def f(x):\n    return 2\n";
  FunctionSlice s = extract_function(src, "f");
  EXPECT_EQ(s.source, "def f(x):\n    return 2\n");
  EXPECT_EQ(s.entry_first_line, 4u);
}

TEST(ExtractFunction, FollowsTransitiveDependenciesInOrder) {
  const std::string src =
      "import re\n"
      "import json\n"
      "LIMIT = 10\n"
      "UNUSED = 3\n"
      "PATTERN = re.compile('[a-z]+')\n"
      "\n"
      "def _clean(s):\n"
      "    return PATTERN.sub('', s)[:LIMIT]\n"
      "\n"
      "class Unused:\n"
      "    pass\n"
      "\n"
      "@staticmethod\n"
      "def other():\n"
      "    return json\n"
      "\n"
      "def entry(s):\n"
      "    return _clean(s)\n"
      "\n"
      "if __name__ == '__main__':\n"
      "    print(entry('x'))\n";
  FunctionSlice s = extract_function(src, "entry");
  EXPECT_EQ(s.source,
            "import re\n"
            "\n"
            "LIMIT = 10\n"
            "\n"
            "PATTERN = re.compile('[a-z]+')\n"
            "\n"
            "def _clean(s):\n"
            "    return PATTERN.sub('', s)[:LIMIT]\n"
            "\n"
            "def entry(s):\n"
            "    return _clean(s)\n");
}

TEST(ExtractFunction, StringsAndCommentsDoNotCreateDependencies) {
  const std::string src =
      "import os\n"
      "def f():\n"
      "    # os is not used here\n"
      "    return 'os.getcwd()'\n";
  EXPECT_EQ(extract_function(src, "f").source, "def f():\n    # os is not used here\n    return 'os.getcwd()'\n");
}

TEST(ExtractFunction, UnparseableSource) {
  EXPECT_THROW(extract_function("def f(:\n    return 'x\n", "f"), SyntaxUnparseable);
  EXPECT_THROW(extract_function("def f(x):\n    return (x\n", "f"), SyntaxUnparseable);
  EXPECT_THROW(extract_function("    def f():\n        pass\n", "f"), SyntaxUnparseable);
}

TEST(ExtractFunction, FutureImportsAlwaysKept) {
  const std::string src = "from __future__ import annotations\nimport os\n\ndef f(x: int) -> int:\n    return x\n";
  EXPECT_EQ(extract_function(src, "f").source,
            "from __future__ import annotations\n\ndef f(x: int) -> int:\n    return x\n");
}

TEST(Identifiers, KeywordsAndShapes) {
  EXPECT_TRUE(is_identifier("safe_divide"));
  EXPECT_TRUE(is_identifier("_x1"));
  EXPECT_FALSE(is_identifier("3bad-name"));
  EXPECT_FALSE(is_identifier(""));
  EXPECT_FALSE(is_identifier("class"));
  EXPECT_TRUE(is_keyword("lambda"));
}

TEST(LastFunctionName, FindsTopLevelOnly) {
  EXPECT_EQ(last_function_name("def a():\n    def inner():\n        pass\n\ndef b():\n    pass\n"), "b");
  EXPECT_EQ(last_function_name("x = 1\n"), std::nullopt);
}

}  // namespace
}  // namespace autosafe::python
