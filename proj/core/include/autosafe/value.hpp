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

#ifndef AUTOSAFE_VALUE_HPP_
#define AUTOSAFE_VALUE_HPP_

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "autosafe/error.hpp"

namespace autosafe {

// Element type of a container argument. Containers only ever hold numbers
// (int or float) or strings.
enum class ElemKind { kNumeric, kText };

// Full type of one fuzzed argument, including the container element kind.
enum class FuzzKind {
  kInt,
  kFloat,
  kStr,
  kBool,
  kListNumeric,
  kListText,
  kDictNumeric,
  kDictText,
};

// Coarse tag, ignoring container element kinds.
enum class TypeTag { kInt, kFloat, kStr, kBool, kList, kDict };

using TypeSignature = std::vector<FuzzKind>;

std::string_view to_string(FuzzKind kind);
std::string_view to_string(TypeTag tag);

// Accepts the canonical names ("int", "float", "str", "bool", "list[numeric]",
// "list[text]", "dict[numeric]", "dict[text]") plus common aliases such as
// "list", "list[int]", "list[str]", "dict[str, str]".
std::optional<FuzzKind> parse_fuzz_kind(std::string_view text);

class FuzzValue;

struct FuzzList {
  ElemKind kind = ElemKind::kNumeric;
  std::vector<FuzzValue> items;
  bool operator==(const FuzzList&) const;
};

struct FuzzDict {
  ElemKind kind = ElemKind::kNumeric;
  std::map<std::string, FuzzValue> entries;
  bool operator==(const FuzzDict&) const;
};

// A typed argument value: Int | Float | Str | Bool | List | Dict.
class FuzzValue {
 public:
  using Storage =
      std::variant<std::int64_t, double, std::string, bool, FuzzList, FuzzDict>;

  FuzzValue() : storage_(std::int64_t{0}) {}

  static FuzzValue Int(std::int64_t v) { return FuzzValue(Storage(v)); }
  static FuzzValue Float(double v) { return FuzzValue(Storage(v)); }
  static FuzzValue Str(std::string v) {
    return FuzzValue(Storage(std::in_place_type<std::string>, std::move(v)));
  }
  static FuzzValue Bool(bool v) { return FuzzValue(Storage(v)); }
  static FuzzValue List(ElemKind kind, std::vector<FuzzValue> items = {});
  static FuzzValue Dict(ElemKind kind,
                        std::map<std::string, FuzzValue> entries = {});

  // Zero value for a kind: 0, 0.0, "", false, empty containers.
  static FuzzValue default_for(FuzzKind kind);

  TypeTag tag() const;
  FuzzKind kind() const;

  bool is_int() const { return std::holds_alternative<std::int64_t>(storage_); }
  bool is_float() const { return std::holds_alternative<double>(storage_); }
  bool is_str() const { return std::holds_alternative<std::string>(storage_); }
  bool is_bool() const { return std::holds_alternative<bool>(storage_); }
  bool is_list() const { return std::holds_alternative<FuzzList>(storage_); }
  bool is_dict() const { return std::holds_alternative<FuzzDict>(storage_); }

  std::int64_t as_int() const { return std::get<std::int64_t>(storage_); }
  double as_float() const { return std::get<double>(storage_); }
  const std::string& as_str() const { return std::get<std::string>(storage_); }
  bool as_bool() const { return std::get<bool>(storage_); }
  const FuzzList& as_list() const { return std::get<FuzzList>(storage_); }
  const FuzzDict& as_dict() const { return std::get<FuzzDict>(storage_); }
  FuzzList& as_list() { return std::get<FuzzList>(storage_); }
  FuzzDict& as_dict() { return std::get<FuzzDict>(storage_); }

  const Storage& storage() const { return storage_; }

  bool operator==(const FuzzValue& other) const {
    return storage_ == other.storage_;
  }

 private:
  explicit FuzzValue(Storage s) : storage_(std::move(s)) {}
  Storage storage_;
};

// Type of one mutation applied to a value.
enum class MutationStrategy {
  kNumDelta,
  kStrNew,
  kStrShuffle,
  kStrAdd,
  kStrRemove,
  kBoolFlip,
  kContainerElem,
};

std::string_view to_string(MutationStrategy s);
std::optional<MutationStrategy> parse_mutation_strategy(std::string_view text);

struct MutationRecord {
  MutationStrategy strategy = MutationStrategy::kNumDelta;
  // Argument index within the tuple; -1 when mutate_value was called directly.
  int parameter = -1;
  // Container element index; -1 for scalars and for empty containers.
  int element = -1;
  // Strategy applied to the container element, for kContainerElem.
  std::optional<MutationStrategy> inner;
  bool operator==(const MutationRecord&) const = default;
};

struct SeedOrigin {
  std::size_t index = 0;
  bool operator==(const SeedOrigin&) const = default;
};

struct MutatedOrigin {
  std::uint64_t parent_id = 0;
  std::size_t iteration = 0;
  MutationRecord mutation;
  bool operator==(const MutatedOrigin&) const = default;
};

// One call's worth of positional arguments plus where it came from.
struct InputTuple {
  std::vector<FuzzValue> values;
  // Identity inside a fuzz run's lineage pool.
  std::uint64_t id = 0;
  std::variant<SeedOrigin, MutatedOrigin> origin = SeedOrigin{};

  std::size_t arity() const { return values.size(); }
  bool operator==(const InputTuple&) const = default;
};

class ConflictingTypes : public Error {
 public:
  explicit ConflictingTypes(std::size_t position)
      : Error("conflicting argument types at position " +
              std::to_string(position)),
        position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

// Canonical JSON: Int/Float as numbers (floats always carry a fraction or an
// exponent), Str as string, Bool as boolean, List as array, Dict as object.
nlohmann::json to_json(const FuzzValue& value);
nlohmann::json to_json(const InputTuple& tuple);  // the argument array only

// Decodes a value. `hint` resolves the element kind of empty containers and
// widens integers to floats. Throws ParseError for values outside the model
// (null, nesting, mixed containers).
FuzzValue fuzz_value_from_json(const nlohmann::json& j,
                               std::optional<FuzzKind> hint = std::nullopt);

// One line, no trailing newline; the harness stdin wire format.
std::string encode_args(const InputTuple& tuple);

// Converts an Int to a Float when the target kind asks for it; other
// mismatches return nullopt.
std::optional<FuzzValue> coerce_to(const FuzzValue& value, FuzzKind kind);

}  // namespace autosafe

#endif  // AUTOSAFE_VALUE_HPP_
