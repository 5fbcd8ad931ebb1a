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

#include "autosafe/value.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <limits>
#include <utility>

namespace autosafe {

bool FuzzList::operator==(const FuzzList& o) const {
  return kind == o.kind && items == o.items;
}

bool FuzzDict::operator==(const FuzzDict& o) const {
  return kind == o.kind && entries == o.entries;
}

FuzzValue FuzzValue::List(ElemKind kind, std::vector<FuzzValue> items) {
  return FuzzValue(Storage(FuzzList{kind, std::move(items)}));
}

FuzzValue FuzzValue::Dict(ElemKind kind,
                          std::map<std::string, FuzzValue> entries) {
  return FuzzValue(Storage(FuzzDict{kind, std::move(entries)}));
}

FuzzValue FuzzValue::default_for(FuzzKind kind) {
  switch (kind) {
    case FuzzKind::kInt:
      return Int(0);
    case FuzzKind::kFloat:
      return Float(0.0);
    case FuzzKind::kStr:
      return Str("");
    case FuzzKind::kBool:
      return Bool(false);
    case FuzzKind::kListNumeric:
      return List(ElemKind::kNumeric);
    case FuzzKind::kListText:
      return List(ElemKind::kText);
    case FuzzKind::kDictNumeric:
      return Dict(ElemKind::kNumeric);
    case FuzzKind::kDictText:
      return Dict(ElemKind::kText);
  }
  return Int(0);
}

TypeTag FuzzValue::tag() const {
  return static_cast<TypeTag>(storage_.index());
}

FuzzKind FuzzValue::kind() const {
  switch (tag()) {
    case TypeTag::kInt:
      return FuzzKind::kInt;
    case TypeTag::kFloat:
      return FuzzKind::kFloat;
    case TypeTag::kStr:
      return FuzzKind::kStr;
    case TypeTag::kBool:
      return FuzzKind::kBool;
    case TypeTag::kList:
      return as_list().kind == ElemKind::kNumeric ? FuzzKind::kListNumeric
                                                  : FuzzKind::kListText;
    case TypeTag::kDict:
      return as_dict().kind == ElemKind::kNumeric ? FuzzKind::kDictNumeric
                                                  : FuzzKind::kDictText;
  }
  return FuzzKind::kInt;
}

std::string_view to_string(FuzzKind kind) {
  switch (kind) {
    case FuzzKind::kInt:
      return "int";
    case FuzzKind::kFloat:
      return "float";
    case FuzzKind::kStr:
      return "str";
    case FuzzKind::kBool:
      return "bool";
    case FuzzKind::kListNumeric:
      return "list[numeric]";
    case FuzzKind::kListText:
      return "list[text]";
    case FuzzKind::kDictNumeric:
      return "dict[numeric]";
    case FuzzKind::kDictText:
      return "dict[text]";
  }
  return "?";
}

std::string_view to_string(TypeTag tag) {
  static constexpr std::array<std::string_view, 6> kNames = {
      "Int", "Float", "Str", "Bool", "List", "Dict"};
  return kNames[static_cast<std::size_t>(tag)];
}

std::optional<FuzzKind> parse_fuzz_kind(std::string_view text) {
  std::string t;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) {
      t.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
  }
  static const std::pair<std::string_view, FuzzKind> kAliases[] = {
      {"int", FuzzKind::kInt},
      {"integer", FuzzKind::kInt},
      {"float", FuzzKind::kFloat},
      {"number", FuzzKind::kFloat},
      {"str", FuzzKind::kStr},
      {"string", FuzzKind::kStr},
      {"bool", FuzzKind::kBool},
      {"boolean", FuzzKind::kBool},
      {"list", FuzzKind::kListNumeric},
      {"list[numeric]", FuzzKind::kListNumeric},
      {"list[int]", FuzzKind::kListNumeric},
      {"list[float]", FuzzKind::kListNumeric},
      {"list[text]", FuzzKind::kListText},
      {"list[str]", FuzzKind::kListText},
      {"dict", FuzzKind::kDictNumeric},
      {"dict[numeric]", FuzzKind::kDictNumeric},
      {"dict[str,int]", FuzzKind::kDictNumeric},
      {"dict[str,float]", FuzzKind::kDictNumeric},
      {"dict[text]", FuzzKind::kDictText},
      {"dict[str]", FuzzKind::kDictText},
      {"dict[str,str]", FuzzKind::kDictText},
  };
  for (const auto& [name, kind] : kAliases) {
    if (t == name) return kind;
  }
  return std::nullopt;
}

std::string_view to_string(MutationStrategy s) {
  switch (s) {
    case MutationStrategy::kNumDelta:
      return "num_delta";
    case MutationStrategy::kStrNew:
      return "str_new";
    case MutationStrategy::kStrShuffle:
      return "str_shuffle";
    case MutationStrategy::kStrAdd:
      return "str_add";
    case MutationStrategy::kStrRemove:
      return "str_remove";
    case MutationStrategy::kBoolFlip:
      return "bool_flip";
    case MutationStrategy::kContainerElem:
      return "container_elem";
  }
  return "?";
}

std::optional<MutationStrategy> parse_mutation_strategy(std::string_view text) {
  for (auto s : {MutationStrategy::kNumDelta, MutationStrategy::kStrNew,
                 MutationStrategy::kStrShuffle, MutationStrategy::kStrAdd,
                 MutationStrategy::kStrRemove, MutationStrategy::kBoolFlip,
                 MutationStrategy::kContainerElem}) {
    if (to_string(s) == text) return s;
  }
  return std::nullopt;
}

nlohmann::json to_json(const FuzzValue& value) {
  return std::visit(
      [](const auto& v) -> nlohmann::json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, FuzzList>) {
          nlohmann::json arr = nlohmann::json::array();
          for (const auto& item : v.items) arr.push_back(to_json(item));
          return arr;
        } else if constexpr (std::is_same_v<T, FuzzDict>) {
          nlohmann::json obj = nlohmann::json::object();
          for (const auto& [k, item] : v.entries) obj[k] = to_json(item);
          return obj;
        } else {
          return nlohmann::json(v);
        }
      },
      value.storage());
}

nlohmann::json to_json(const InputTuple& tuple) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& v : tuple.values) arr.push_back(to_json(v));
  return arr;
}

std::string encode_args(const InputTuple& tuple) {
  return to_json(tuple).dump(-1, ' ', false,
                             nlohmann::json::error_handler_t::replace);
}

namespace {

FuzzValue scalar_from_json(const nlohmann::json& j) {
  if (j.is_boolean()) return FuzzValue::Bool(j.get<bool>());
  if (j.is_number_integer() && !j.is_number_unsigned()) {
    return FuzzValue::Int(j.get<std::int64_t>());
  }
  if (j.is_number_unsigned()) {
    const auto u = j.get<std::uint64_t>();
    if (u > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max())) {
      throw ParseError(0, "integer argument out of 64-bit range");
    }
    return FuzzValue::Int(static_cast<std::int64_t>(u));
  }
  if (j.is_number_float()) return FuzzValue::Float(j.get<double>());
  if (j.is_string()) return FuzzValue::Str(j.get<std::string>());
  throw ParseError(0, "unsupported argument value: " + j.dump());
}

ElemKind elem_kind_of(const FuzzValue& v) {
  if (v.is_int() || v.is_float()) return ElemKind::kNumeric;
  if (v.is_str()) return ElemKind::kText;
  throw ParseError(0, "container elements must be numbers or strings");
}

ElemKind container_kind(const std::vector<const FuzzValue*>& items,
                        std::optional<ElemKind> hinted) {
  if (items.empty()) return hinted.value_or(ElemKind::kNumeric);
  const ElemKind first = elem_kind_of(*items.front());
  for (const auto* item : items) {
    if (elem_kind_of(*item) != first) {
      throw ParseError(0, "container mixes numbers and strings");
    }
  }
  if (hinted && *hinted != first) {
    throw ParseError(0, "container element kind does not match hint");
  }
  return first;
}

}  // namespace

FuzzValue fuzz_value_from_json(const nlohmann::json& j,
                               std::optional<FuzzKind> hint) {
  if (j.is_array()) {
    std::optional<ElemKind> hinted;
    if (hint == FuzzKind::kListNumeric) hinted = ElemKind::kNumeric;
    if (hint == FuzzKind::kListText) hinted = ElemKind::kText;
    if (hint && !hinted) throw ParseError(0, "unexpected array argument");
    std::vector<FuzzValue> items;
    items.reserve(j.size());
    for (const auto& e : j) items.push_back(scalar_from_json(e));
    std::vector<const FuzzValue*> ptrs;
    for (const auto& e : items) ptrs.push_back(&e);
    return FuzzValue::List(container_kind(ptrs, hinted), std::move(items));
  }
  if (j.is_object()) {
    std::optional<ElemKind> hinted;
    if (hint == FuzzKind::kDictNumeric) hinted = ElemKind::kNumeric;
    if (hint == FuzzKind::kDictText) hinted = ElemKind::kText;
    if (hint && !hinted) throw ParseError(0, "unexpected object argument");
    std::map<std::string, FuzzValue> entries;
    for (const auto& [k, e] : j.items()) entries.emplace(k, scalar_from_json(e));
    std::vector<const FuzzValue*> ptrs;
    for (const auto& [k, e] : entries) ptrs.push_back(&e);
    return FuzzValue::Dict(container_kind(ptrs, hinted), std::move(entries));
  }
  FuzzValue v = scalar_from_json(j);
  if (hint) {
    auto coerced = coerce_to(v, *hint);
    if (!coerced) {
      throw ParseError(0, "argument " + j.dump() + " is not of kind " +
                              std::string(to_string(*hint)));
    }
    return *coerced;
  }
  return v;
}

std::optional<FuzzValue> coerce_to(const FuzzValue& value, FuzzKind kind) {
  if (value.kind() == kind) return value;
  if (value.is_int() && kind == FuzzKind::kFloat) {
    return FuzzValue::Float(static_cast<double>(value.as_int()));
  }
  // An empty container adopts whichever element kind is asked for.
  if (value.is_list() && value.as_list().items.empty() &&
      (kind == FuzzKind::kListNumeric || kind == FuzzKind::kListText)) {
    return FuzzValue::default_for(kind);
  }
  if (value.is_dict() && value.as_dict().entries.empty() &&
      (kind == FuzzKind::kDictNumeric || kind == FuzzKind::kDictText)) {
    return FuzzValue::default_for(kind);
  }
  return std::nullopt;
}

}  // namespace autosafe
