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

#include "autosafe/llm.hpp"

namespace autosafe {
namespace {

void BM_RequestDigest(benchmark::State& state) {
  ChatRequest r;
  r.model = "gpt-4o";
  r.messages = {{"system", "You are a careful reviewer."},
                {"user", std::string(static_cast<std::size_t>(state.range(0)), 'q')}};
  for (auto _ : state) benchmark::DoNotOptimize(request_digest(r));
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * state.range(0)));
}
BENCHMARK(BM_RequestDigest)->Arg(256)->Arg(16384);

}  // namespace
}  // namespace autosafe
