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

#include "autosafe/corpus.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "autosafe/python_source.hpp"

namespace autosafe {

std::string_view to_string(CorpusFormat format) {
  switch (format) {
    case CorpusFormat::kSecurityEvalLike:
      return "security-eval-like";
    case CorpusFormat::kHumanEvalLike:
      return "human-eval-like";
    case CorpusFormat::kNative:
      return "native";
  }
  return "native";
}

std::optional<CorpusFormat> parse_corpus_format(std::string_view text) {
  for (auto f : {CorpusFormat::kSecurityEvalLike, CorpusFormat::kHumanEvalLike,
                 CorpusFormat::kNative}) {
    if (to_string(f) == text) return f;
  }
  return std::nullopt;
}

namespace {

struct RawRecord {
  nlohmann::json object;
  std::size_t line = 0;
};

std::vector<RawRecord> split_records(std::string_view text) {
  std::vector<RawRecord> records;
  std::size_t first = text.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return records;
  if (text[first] == '[') {
    nlohmann::json arr;
    try {
      arr = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(0, e.what());
    }
    for (auto& element : arr) {
      if (!element.is_object()) throw ParseError(0, "array element is not an object");
      records.push_back({std::move(element), 0});
    }
    return records;
  }
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t nl = text.find('\n', start);
    if (nl == std::string_view::npos) nl = text.size();
    ++line_no;
    std::string_view line = text.substr(start, nl - start);
    start = nl + 1;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(line_no, e.what());
    }
    if (!obj.is_object()) throw ParseError(line_no, "record is not a JSON object");
    records.push_back({std::move(obj), line_no});
  }
  return records;
}

std::string take_string(nlohmann::json& obj, const char* key, std::size_t index,
                        bool required) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    if (required) throw SchemaError(index, key);
    return {};
  }
  if (!it->is_string()) throw SchemaError(index, key);
  std::string value = it->get<std::string>();
  obj.erase(it);
  return value;
}

void take_native_optionals(nlohmann::json& obj, TaskSpec& task, std::size_t index) {
  if (auto it = obj.find("param_types"); it != obj.end()) {
    if (!it->is_null()) {
      if (!it->is_array()) throw SchemaError(index, "param_types");
      TypeSignature sig;
      for (const auto& k : *it) {
        if (!k.is_string()) throw SchemaError(index, "param_types");
        auto kind = parse_fuzz_kind(k.get<std::string>());
        if (!kind) throw SchemaError(index, "param_types");
        sig.push_back(*kind);
      }
      task.param_types = std::move(sig);
    }
    obj.erase(it);
  }
  if (auto it = obj.find("setup_imports"); it != obj.end()) {
    if (!it->is_null()) {
      if (!it->is_array()) throw SchemaError(index, "setup_imports");
      std::vector<std::string> mods;
      for (const auto& m : *it) {
        if (!m.is_string()) throw SchemaError(index, "setup_imports");
        mods.push_back(m.get<std::string>());
      }
      task.setup_imports = std::move(mods);
    }
    obj.erase(it);
  }
  if (auto it = obj.find("functional_tests"); it != obj.end()) {
    if (!it->is_null()) {
      if (!it->is_string()) throw SchemaError(index, "functional_tests");
      task.functional_tests = it->get<std::string>();
    }
    obj.erase(it);
  }
}

TaskSpec map_record(nlohmann::json obj, CorpusFormat format, std::size_t index) {
  TaskSpec task;
  switch (format) {
    case CorpusFormat::kNative:
      task.id = take_string(obj, "id", index, true);
      task.prompt = take_string(obj, "prompt", index, true);
      task.entry_point = take_string(obj, "entry_point", index, true);
      take_native_optionals(obj, task, index);
      break;
    case CorpusFormat::kSecurityEvalLike: {
      task.id = take_string(obj, "ID", index, true);
      task.prompt = take_string(obj, "Prompt", index, true);
      auto name = python::last_function_name(task.prompt);
      if (!name) throw SchemaError(index, "Prompt (no function definition)");
      task.entry_point = *name;
      break;
    }
    case CorpusFormat::kHumanEvalLike: {
      task.id = take_string(obj, "task_id", index, true);
      task.prompt = take_string(obj, "prompt", index, true);
      task.entry_point = take_string(obj, "entry_point", index, true);
      std::string test = take_string(obj, "test", index, false);
      if (!test.empty()) task.functional_tests = std::move(test);
      break;
    }
  }
  if (task.id.empty()) throw SchemaError(index, "id");
  if (task.prompt.empty()) throw SchemaError(index, "prompt");
  if (!python::is_identifier(task.entry_point)) throw SchemaError(index, "entry_point");
  task.extras = std::move(obj);
  return task;
}

}  // namespace

Corpus parse_corpus(std::string_view text, CorpusFormat format, std::string origin) {
  Corpus corpus;
  corpus.source_path = std::move(origin);
  corpus.format = format;
  std::set<std::string> ids;
  auto records = split_records(text);
  for (std::size_t i = 0; i < records.size(); ++i) {
    TaskSpec task;
    try {
      task = map_record(std::move(records[i].object), format, i);
    } catch (const nlohmann::json::exception& e) {
      throw SchemaError(i, e.what());
    }
    if (!ids.insert(task.id).second) throw SchemaError(i, "id (duplicate '" + task.id + "')");
    corpus.tasks.push_back(std::move(task));
  }
  return corpus;
}

Corpus load_corpus(const std::filesystem::path& path, CorpusFormat format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileNotFound(path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_corpus(buf.str(), format, path.string());
}

nlohmann::json to_native_json(const TaskSpec& task) {
  nlohmann::json out = task.extras.is_object() ? task.extras : nlohmann::json::object();
  out["id"] = task.id;
  out["prompt"] = task.prompt;
  out["entry_point"] = task.entry_point;
  if (task.param_types) {
    nlohmann::json kinds = nlohmann::json::array();
    for (auto k : *task.param_types) kinds.push_back(std::string(to_string(k)));
    out["param_types"] = kinds;
  }
  if (task.setup_imports) out["setup_imports"] = *task.setup_imports;
  if (task.functional_tests) out["functional_tests"] = *task.functional_tests;
  return out;
}

std::string serialize_native(const Corpus& corpus) {
  std::string out;
  for (const auto& task : corpus.tasks) {
    // Field order: the three required keys first, for readable diffs.
    const nlohmann::json full = to_native_json(task);
    const auto dump = [](const nlohmann::json& j) {
      return j.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
    };
    std::string line = "{";
    for (const char* key : {"id", "prompt", "entry_point"}) {
      if (line.size() > 1) line += ',';
      line += dump(key) + ':' + dump(full[key]);
    }
    for (const auto& [k, v] : full.items()) {
      if (k == "id" || k == "prompt" || k == "entry_point") continue;
      line += ',' + dump(k) + ':' + dump(v);
    }
    out += line + '}';
    out += '\n';
  }
  return out;
}

void save_native(const Corpus& corpus, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write corpus: " + path.string());
  out << serialize_native(corpus);
}

ValidationResult validate_task(const TaskSpec& task, ValidationOptions options) {
  ValidationResult result;
  if (task.id.empty()) result.violations.push_back("empty id");
  if (task.prompt.empty()) result.violations.push_back("empty prompt");
  if (!python::is_identifier(task.entry_point)) {
    result.violations.push_back("invalid entry_point identifier: '" + task.entry_point + "'");
  }
  if (options.strict && task.param_types) {
    if (auto arity = python::positional_arity(task.prompt, task.entry_point)) {
      if (*arity != task.param_types->size()) {
        result.violations.push_back(
            "param_types arity " + std::to_string(task.param_types->size()) +
            " does not match signature arity " + std::to_string(*arity));
      }
    }
  }
  return result;
}

}  // namespace autosafe
