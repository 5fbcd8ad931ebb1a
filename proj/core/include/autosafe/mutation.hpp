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

#ifndef AUTOSAFE_MUTATION_HPP_
#define AUTOSAFE_MUTATION_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "autosafe/error.hpp"
#include "autosafe/rng.hpp"
#include "autosafe/value.hpp"

namespace autosafe {

// Magnitude policy for numeric deltas and the new-string generator.
namespace mutation_policy {
inline constexpr std::int64_t kMaxIntDelta = std::int64_t{1} << 16;
inline constexpr double kMaxFloatScale = 1000.0;
inline constexpr std::size_t kMaxNewStringLength = 64;
// Hazard strings replace a freshly generated string 1 time in 10.
inline constexpr std::uint64_t kHazardNumer = 1;
inline constexpr std::uint64_t kHazardDenom = 10;
}  // namespace mutation_policy

// Strings that historically shake out crashes: empty, very long, quote and
// backslash heavy, format specifiers, path traversal, etc.
std::span<const std::string> hazard_strings();

struct MutationResult {
  FuzzValue value;
  MutationRecord record;
};

// Type-aware mutation of a single value. The result always has the same
// FuzzKind as the input.
//
//   Int    +/- uniform [1, 2^16]; the sign flips if the sum would overflow.
//   Float  +/- u * max(1, |v|) with u uniform in (0, 1000]; if that leaves
//          the finite range the value is halved instead.
//   Str    one of str_new / str_shuffle / str_add / str_remove, uniformly.
//          str_remove on "" falls back to str_new. Strings are handled as
//          Unicode code points.
//   Bool   uniformly random boolean (strategy bool_flip).
//   List/Dict  one element mutated by its own type; empty containers come
//          back unchanged with element = -1.
MutationResult mutate_value(const FuzzValue& value, Rng& rng);

class EmptyTuple : public Error {
 public:
  EmptyTuple() : Error("cannot mutate a zero-argument input tuple") {}
};

// Mutates exactly one argument position, chosen uniformly. The result's
// origin is MutatedOrigin{t.id, iteration, record}; its id is left at 0 for
// the caller to assign.
InputTuple mutate_tuple(const InputTuple& t, Rng& rng, std::size_t iteration);

// Per-position kind shared by all seeds; Int and Float unify to Float, an
// empty container adopts the element kind of a non-empty one.
// Throws ContractViolation on empty input or mixed arity and
// ConflictingTypes(position) for irreconcilable kinds.
TypeSignature infer_types(std::span<const InputTuple> seeds);

// Unification step used by infer_types; nullopt when the kinds conflict.
std::optional<FuzzKind> unify_kinds(FuzzKind a, FuzzKind b);

// UTF-8 helpers shared with the sandbox (tail trimming) and tests.
std::u32string decode_utf8(std::string_view text);
std::string encode_utf8(std::u32string_view text);

}  // namespace autosafe

#endif  // AUTOSAFE_MUTATION_HPP_
