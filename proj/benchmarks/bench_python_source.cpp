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

#include <benchmark/benchmark.h>

#include <string>

#include "autosafe/python_source.hpp"

namespace autosafe {
namespace {

// A module of `n` helper functions, a class and the entry point calling the
// last helper.
std::string module_with(int n) {
  std::string s = "import os\nimport re\n\nLIMIT = 10\n\n";
  for (int i = 0; i < n; ++i) {
    s += "def helper_" + std::to_string(i) + "(x, y=lambda a, b: a):\n";
    s += "    \"\"\"doc\"\"\"\n    return [v for v in (x, LIMIT) if v]\n\n";
  }
  s += "class Box:\n    def get(self):\n        return 1\n\n";
  s += "def entry(a, b):\n    return helper_" + std::to_string(n - 1) + "(a) + Box().get()\n";
  return s;
}

void BM_ExtractFunction(benchmark::State& state) {
  const std::string src = module_with(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(python::extract_function(src, "entry"));
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * src.size()));
}
BENCHMARK(BM_ExtractFunction)->Arg(4)->Arg(64)->Arg(512);

void BM_PositionalArity(benchmark::State& state) {
  const std::string src = module_with(64);
  for (auto _ : state) benchmark::DoNotOptimize(python::positional_arity(src, "entry"));
}
BENCHMARK(BM_PositionalArity);

}  // namespace
}  // namespace autosafe
