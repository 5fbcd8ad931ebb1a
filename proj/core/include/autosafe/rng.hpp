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

#ifndef AUTOSAFE_RNG_HPP_
#define AUTOSAFE_RNG_HPP_

#include <array>
#include <cstdint>
#include <string_view>

namespace autosafe {

// Explicit-seed random source with a fixed algorithm so that golden
// sequences are identical on every platform and standard library:
//
//   * state: xoshiro256** (Blackman & Vigna), four 64-bit words;
//   * seeding: the 64-bit seed is expanded with SplitMix64;
//   * bounded integers: Lemire's multiply-shift with rejection;
//   * unit doubles: top 53 bits of next() scaled by 2^-53.
//
// std:: distributions are deliberately not used; their output is
// implementation-defined.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed);

  std::uint64_t next();
  std::uint64_t operator()() { return next(); }
  static constexpr std::uint64_t min() { return 0; }
  static constexpr std::uint64_t max() { return ~std::uint64_t{0}; }

  // Uniform in [0, bound). bound must be > 0.
  std::uint64_t below(std::uint64_t bound);
  // Uniform in [lo, hi], inclusive.
  std::int64_t between(std::int64_t lo, std::int64_t hi);
  // Uniform in [0, 1).
  double unit();
  bool coin() { return (next() >> 63) != 0; }
  // True with probability numer/denom.
  bool chance(std::uint64_t numer, std::uint64_t denom) {
    return below(denom) < numer;
  }

 private:
  std::array<std::uint64_t, 4> s_;
};

std::uint64_t splitmix64(std::uint64_t& state);

// FNV-1a over the little-endian bytes of `base` followed by `label`, then one
// SplitMix64 finalization round. Stable across platforms.
std::uint64_t derive_seed(std::uint64_t base, std::string_view label);

}  // namespace autosafe

#endif  // AUTOSAFE_RNG_HPP_
