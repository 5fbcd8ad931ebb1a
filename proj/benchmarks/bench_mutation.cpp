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

#include "autosafe/mutation.hpp"

namespace autosafe {
namespace {

void BM_MutateInt(benchmark::State& state) {
  Rng rng(1);
  const FuzzValue v = FuzzValue::Int(5);
  for (auto _ : state) benchmark::DoNotOptimize(mutate_value(v, rng));
}
BENCHMARK(BM_MutateInt);

void BM_MutateStr(benchmark::State& state) {
  Rng rng(1);
  const FuzzValue v = FuzzValue::Str(std::string(static_cast<std::size_t>(state.range(0)), 'x'));
  for (auto _ : state) benchmark::DoNotOptimize(mutate_value(v, rng));
}
BENCHMARK(BM_MutateStr)->Arg(8)->Arg(256)->Arg(4096);

void BM_MutateTuple(benchmark::State& state) {
  Rng rng(1);
  InputTuple t;
  t.values = {FuzzValue::Int(1), FuzzValue::Str("hello"),
              FuzzValue::List(ElemKind::kNumeric, {FuzzValue::Int(1), FuzzValue::Float(2.5)}),
              FuzzValue::Dict(ElemKind::kText, {{"a", FuzzValue::Str("b")}})};
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(mutate_tuple(t, rng, ++i));
}
BENCHMARK(BM_MutateTuple);

}  // namespace
}  // namespace autosafe
