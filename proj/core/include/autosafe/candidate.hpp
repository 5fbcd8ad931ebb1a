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

#ifndef AUTOSAFE_CANDIDATE_HPP_
#define AUTOSAFE_CANDIDATE_HPP_

#include <optional>
#include <string>
#include <string_view>

namespace autosafe {

enum class ProvenanceKind { kInitial, kStaticFix, kFuzzFix };

std::string_view to_string(ProvenanceKind kind);
std::optional<ProvenanceKind> parse_provenance_kind(std::string_view text);

// What produced a code version. `round` is 0 for the initial generation.
struct Provenance {
  ProvenanceKind kind = ProvenanceKind::kInitial;
  int round = 0;
  bool operator==(const Provenance&) const = default;
};

// One version of the generated code for a task. Versions start at 0 and
// each revision adds exactly 1.
struct CandidateCode {
  std::string task_id;
  int version = 0;
  std::string source;
  Provenance provenance;
  bool operator==(const CandidateCode&) const = default;
};

}  // namespace autosafe

#endif  // AUTOSAFE_CANDIDATE_HPP_
