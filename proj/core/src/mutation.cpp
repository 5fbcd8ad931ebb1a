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

#include "autosafe/mutation.hpp"

#include <cmath>
#include <limits>
#include <utility>

namespace autosafe {

std::span<const std::string> hazard_strings() {
  static const std::vector<std::string> kHazards = {
      "",
      std::string(4096, 'A'),
      "'\"'\"\\\\\\'\"\\",
      "%s%s%s%s%n%x%d",
      "{0}{1}{__class__}",
      "../../../../etc/passwd",
      "' OR '1'='1' --",
      "<script>alert(1)</script>",
      "$(id);`id`|id",
      "\r\n\t\v\f",
      "\xe2\x80\xae" "evil" "\xe2\x80\x8b",
      "NaN",
      "-1",
      "9999999999999999999999999999",
      "\\x00\\u0000",
      "()[]{}",
  };
  return kHazards;
}

std::u32string decode_utf8(std::string_view text) {
  std::u32string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    const auto b0 = static_cast<unsigned char>(text[i]);
    std::size_t len = 0;
    char32_t cp = 0;
    if (b0 < 0x80) {
      len = 1;
      cp = b0;
    } else if ((b0 & 0xE0) == 0xC0) {
      len = 2;
      cp = b0 & 0x1F;
    } else if ((b0 & 0xF0) == 0xE0) {
      len = 3;
      cp = b0 & 0x0F;
    } else if ((b0 & 0xF8) == 0xF0) {
      len = 4;
      cp = b0 & 0x07;
    }
    bool ok = len > 0 && i + len <= text.size();
    for (std::size_t k = 1; ok && k < len; ++k) {
      const auto b = static_cast<unsigned char>(text[i + k]);
      if ((b & 0xC0) != 0x80) {
        ok = false;
      } else {
        cp = (cp << 6) | (b & 0x3F);
      }
    }
    if (ok) {
      out.push_back(cp);
      i += len;
    } else {
      // Undecodable byte: keep it losslessly as a lone low surrogate.
      out.push_back(static_cast<char32_t>(0xDC00 + b0));
      i += 1;
    }
  }
  return out;
}

std::string encode_utf8(std::u32string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char32_t cp : text) {
    if (cp >= 0xDC80 && cp <= 0xDCFF) {
      out.push_back(static_cast<char>(cp - 0xDC00));
    } else if (cp < 0x80) {
      out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
      out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
      out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
      out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
  }
  return out;
}

namespace {

char32_t printable_ascii(Rng& rng) {
  return static_cast<char32_t>(0x20 + rng.below(0x7F - 0x20));
}

std::string new_string(Rng& rng) {
  if (rng.chance(mutation_policy::kHazardNumer, mutation_policy::kHazardDenom)) {
    const auto hazards = hazard_strings();
    return hazards[rng.below(hazards.size())];
  }
  const auto len = rng.below(mutation_policy::kMaxNewStringLength + 1);
  std::u32string s;
  s.reserve(len);
  for (std::uint64_t i = 0; i < len; ++i) s.push_back(printable_ascii(rng));
  return encode_utf8(s);
}

std::int64_t mutate_int(std::int64_t v, Rng& rng) {
  std::int64_t delta = rng.between(1, mutation_policy::kMaxIntDelta);
  if (rng.coin()) delta = -delta;
  constexpr auto kMax = std::numeric_limits<std::int64_t>::max();
  constexpr auto kMin = std::numeric_limits<std::int64_t>::min();
  if ((delta > 0 && v > kMax - delta) || (delta < 0 && v < kMin - delta)) {
    delta = -delta;
  }
  return v + delta;
}

double mutate_float(double v, Rng& rng) {
  // (0, 1000]: 1 - unit() is in (0, 1].
  const double u = (1.0 - rng.unit()) * mutation_policy::kMaxFloatScale;
  double delta = u * std::max(1.0, std::fabs(v));
  if (rng.coin()) delta = -delta;
  double out = v + delta;
  if (!std::isfinite(out)) out = v - delta;
  if (!std::isfinite(out) || out == v) {
    // Only reachable for |v| near the top of the double range or a
    // non-finite input.
    out = std::isfinite(v) && v != 0.0 ? v / 2.0 : 1.0;
  }
  return out;
}

std::pair<std::string, MutationStrategy> mutate_string(const std::string& s,
                                                       Rng& rng) {
  auto strategy = static_cast<MutationStrategy>(
      static_cast<int>(MutationStrategy::kStrNew) + static_cast<int>(rng.below(4)));
  std::u32string cps = decode_utf8(s);
  if (strategy == MutationStrategy::kStrRemove && cps.empty()) {
    strategy = MutationStrategy::kStrNew;
  }
  switch (strategy) {
    case MutationStrategy::kStrShuffle:
      // Fisher-Yates, highest index first.
      for (std::size_t i = cps.size(); i > 1; --i) {
        std::swap(cps[i - 1], cps[rng.below(i)]);
      }
      return {encode_utf8(cps), strategy};
    case MutationStrategy::kStrAdd: {
      const auto pos = rng.below(cps.size() + 1);
      cps.insert(cps.begin() + static_cast<std::ptrdiff_t>(pos),
                 printable_ascii(rng));
      return {encode_utf8(cps), strategy};
    }
    case MutationStrategy::kStrRemove: {
      const auto pos = rng.below(cps.size());
      cps.erase(cps.begin() + static_cast<std::ptrdiff_t>(pos));
      return {encode_utf8(cps), strategy};
    }
    default:
      return {new_string(rng), MutationStrategy::kStrNew};
  }
}

MutationRecord record_of(MutationStrategy strategy) {
  MutationRecord r;
  r.strategy = strategy;
  return r;
}

MutationResult mutate_scalar(const FuzzValue& value, Rng& rng) {
  switch (value.tag()) {
    case TypeTag::kInt:
      return {FuzzValue::Int(mutate_int(value.as_int(), rng)),
              record_of(MutationStrategy::kNumDelta)};
    case TypeTag::kFloat:
      return {FuzzValue::Float(mutate_float(value.as_float(), rng)),
              record_of(MutationStrategy::kNumDelta)};
    case TypeTag::kStr: {
      auto [s, strategy] = mutate_string(value.as_str(), rng);
      return {FuzzValue::Str(std::move(s)), record_of(strategy)};
    }
    case TypeTag::kBool:
      return {FuzzValue::Bool(rng.coin()), record_of(MutationStrategy::kBoolFlip)};
    default:
      break;
  }
  throw ContractViolation("mutate_scalar called on a container");
}

}  // namespace

MutationResult mutate_value(const FuzzValue& value, Rng& rng) {
  MutationRecord record = record_of(MutationStrategy::kContainerElem);
  if (value.is_list()) {
    FuzzList list = value.as_list();
    if (list.items.empty()) return {value, record};
    const auto idx = rng.below(list.items.size());
    auto inner = mutate_scalar(list.items[idx], rng);
    list.items[idx] = std::move(inner.value);
    record.element = static_cast<int>(idx);
    record.inner = inner.record.strategy;
    return {FuzzValue::List(list.kind, std::move(list.items)), record};
  }
  if (value.is_dict()) {
    FuzzDict dict = value.as_dict();
    if (dict.entries.empty()) return {value, record};
    const auto idx = rng.below(dict.entries.size());
    auto it = std::next(dict.entries.begin(), static_cast<std::ptrdiff_t>(idx));
    auto inner = mutate_scalar(it->second, rng);
    it->second = std::move(inner.value);
    record.element = static_cast<int>(idx);
    record.inner = inner.record.strategy;
    return {FuzzValue::Dict(dict.kind, std::move(dict.entries)), record};
  }
  return mutate_scalar(value, rng);
}

InputTuple mutate_tuple(const InputTuple& t, Rng& rng, std::size_t iteration) {
  if (t.values.empty()) throw EmptyTuple();
  const auto position = rng.below(t.values.size());
  InputTuple out;
  out.values = t.values;
  auto result = mutate_value(t.values[position], rng);
  out.values[position] = std::move(result.value);
  result.record.parameter = static_cast<int>(position);
  out.origin = MutatedOrigin{t.id, iteration, result.record};
  return out;
}

std::optional<FuzzKind> unify_kinds(FuzzKind a, FuzzKind b) {
  if (a == b) return a;
  const bool numeric_a = a == FuzzKind::kInt || a == FuzzKind::kFloat;
  const bool numeric_b = b == FuzzKind::kInt || b == FuzzKind::kFloat;
  if (numeric_a && numeric_b) return FuzzKind::kFloat;
  return std::nullopt;
}

namespace {

bool is_empty_container(const FuzzValue& v) {
  return (v.is_list() && v.as_list().items.empty()) ||
         (v.is_dict() && v.as_dict().entries.empty());
}

}  // namespace

TypeSignature infer_types(std::span<const InputTuple> seeds) {
  if (seeds.empty()) throw ContractViolation("infer_types needs at least one seed");
  const std::size_t arity = seeds.front().arity();
  for (const auto& s : seeds) {
    if (s.arity() != arity) {
      throw ContractViolation("infer_types: seeds differ in arity");
    }
  }
  TypeSignature sig(arity);
  for (std::size_t pos = 0; pos < arity; ++pos) {
    std::optional<FuzzKind> kind;
    std::optional<TypeTag> empty_container_tag;
    std::optional<FuzzKind> empty_kind;
    for (const auto& s : seeds) {
      const FuzzValue& v = s.values[pos];
      if (is_empty_container(v)) {
        if (empty_container_tag && *empty_container_tag != v.tag()) {
          throw ConflictingTypes(pos);
        }
        empty_container_tag = v.tag();
        if (!empty_kind) empty_kind = v.kind();
        continue;
      }
      if (!kind) {
        kind = v.kind();
      } else {
        kind = unify_kinds(*kind, v.kind());
        if (!kind) throw ConflictingTypes(pos);
      }
    }
    if (kind && empty_container_tag) {
      const bool list_ok = *empty_container_tag == TypeTag::kList &&
                           (*kind == FuzzKind::kListNumeric ||
                            *kind == FuzzKind::kListText);
      const bool dict_ok = *empty_container_tag == TypeTag::kDict &&
                           (*kind == FuzzKind::kDictNumeric ||
                            *kind == FuzzKind::kDictText);
      if (!list_ok && !dict_ok) throw ConflictingTypes(pos);
    }
    sig[pos] = kind ? *kind : *empty_kind;
  }
  return sig;
}

}  // namespace autosafe
