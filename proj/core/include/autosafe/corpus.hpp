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

#ifndef AUTOSAFE_CORPUS_HPP_
#define AUTOSAFE_CORPUS_HPP_

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "autosafe/error.hpp"
#include "autosafe/value.hpp"

namespace autosafe {

// One code-generation task.
struct TaskSpec {
  std::string id;
  // Docstring plus any partial source; handed to the model as opaque text.
  std::string prompt;
  std::string entry_point;
  std::optional<TypeSignature> param_types;
  std::optional<std::vector<std::string>> setup_imports;
  // HumanEval-style `check(candidate)` test source.
  std::optional<std::string> functional_tests;
  // Record fields the loader did not recognise, kept verbatim.
  nlohmann::json extras = nlohmann::json::object();

  bool operator==(const TaskSpec&) const = default;
};

enum class CorpusFormat { kSecurityEvalLike, kHumanEvalLike, kNative };

std::string_view to_string(CorpusFormat format);
std::optional<CorpusFormat> parse_corpus_format(std::string_view text);

struct Corpus {
  std::vector<TaskSpec> tasks;
  std::string source_path;
  CorpusFormat format = CorpusFormat::kNative;
};

class SchemaError : public Error {
 public:
  SchemaError(std::size_t task_index, const std::string& field)
      : Error("record " + std::to_string(task_index) + ": missing or invalid field '" +
              field + "'"),
        task_index_(task_index),
        field_(field) {}
  std::size_t task_index() const { return task_index_; }
  const std::string& field() const { return field_; }

 private:
  std::size_t task_index_;
  std::string field_;
};

// Reads a JSONL file (one object per line, blank lines skipped) or a JSON
// array. Record indices in errors are 0-based; ParseError lines are 1-based.
// Throws FileNotFound, ParseError, SchemaError.
Corpus load_corpus(const std::filesystem::path& path, CorpusFormat format);

// Parses already-loaded text; `origin` is only used as Corpus::source_path.
Corpus parse_corpus(std::string_view text, CorpusFormat format,
                    std::string origin = {});

// Native JSONL: `id`, `prompt`, `entry_point`, then the optional fields, then
// extras. One record per line, trailing newline.
std::string serialize_native(const Corpus& corpus);
void save_native(const Corpus& corpus, const std::filesystem::path& path);

nlohmann::json to_native_json(const TaskSpec& task);

struct ValidationOptions {
  // Also require param_types arity to match the entry point's signature in
  // the prompt when one can be found there.
  bool strict = false;
};

struct ValidationResult {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

ValidationResult validate_task(const TaskSpec& task,
                               ValidationOptions options = {});

}  // namespace autosafe

#endif  // AUTOSAFE_CORPUS_HPP_
