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

#ifndef AUTOSAFE_PYTHON_SOURCE_HPP_
#define AUTOSAFE_PYTHON_SOURCE_HPP_

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "autosafe/error.hpp"

// Lexical (not grammatical) view of Python source: enough to cut a module
// into top-level statements, find what each one binds and references, and
// read a function's parameter list. It never executes or fully parses code.
namespace autosafe::python {

class SyntaxUnparseable : public Error {
 public:
  SyntaxUnparseable(std::size_t line, const std::string& what)
      : Error("unparseable source at line " + std::to_string(line) + ": " +
              what),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class EntryPointNotFound : public Error {
 public:
  explicit EntryPointNotFound(const std::string& name)
      : Error("entry point not defined: " + name), name_(name) {}
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

enum class UnitKind { kFunction, kClass, kImport, kAssignment, kCompound, kOther };

// One top-level statement (with its decorators and indented body).
struct TopLevelUnit {
  std::size_t first_line = 0;  // 1-based, inclusive
  std::size_t last_line = 0;
  UnitKind kind = UnitKind::kOther;
  std::vector<std::string> binds;
  std::set<std::string> references;
  bool star_import = false;
  bool future_import = false;
  std::string text;
};

// Throws SyntaxUnparseable on unterminated strings, unbalanced brackets, an
// indented first statement, or a malformed def/class header.
std::vector<TopLevelUnit> split_top_level(std::string_view source);

struct FunctionSlice {
  std::string entry_point;
  // The entry-point definition plus every top-level statement it
  // transitively depends on, in original order.
  std::string source;
  std::size_t entry_first_line = 0;
  std::vector<std::size_t> unit_first_lines;
};

// When several units define `entry_point`, the last one wins (the binding
// Python would see at call time). Throws EntryPointNotFound or
// SyntaxUnparseable.
FunctionSlice extract_function(std::string_view source,
                               std::string_view entry_point);

bool is_identifier(std::string_view name);
bool is_keyword(std::string_view name);

// Number of parameters of `def function(...)` that can be passed
// positionally, or nullopt when the source has no such def.
std::optional<std::size_t> positional_arity(std::string_view source,
                                            std::string_view function);

// Name of the last top-level `def` in the source, if any.
std::optional<std::string> last_function_name(std::string_view source);

}  // namespace autosafe::python

#endif  // AUTOSAFE_PYTHON_SOURCE_HPP_
