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

#include "autosafe/metrics.hpp"

namespace autosafe {
namespace {

void BM_PassAtK(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    for (std::size_t c = 0; c <= n; c += 7) benchmark::DoNotOptimize(pass_at_k(n, c, n / 2 + 1));
  }
}
BENCHMARK(BM_PassAtK)->Arg(10)->Arg(200)->Arg(5000);

}  // namespace
}  // namespace autosafe

BENCHMARK_MAIN();
