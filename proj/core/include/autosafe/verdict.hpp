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

#ifndef AUTOSAFE_VERDICT_HPP_
#define AUTOSAFE_VERDICT_HPP_

#include <string>
#include <vector>

namespace autosafe {

struct Finding {
  std::string cwe_id;  // "CWE-<digits>"
  std::string description;
  std::string remediation;
  bool operator==(const Finding&) const = default;
};

// Reviewer verdict. secure is true exactly when findings is empty.
struct StaticVerdict {
  bool secure = true;
  std::vector<Finding> findings;
  std::string raw_reply;
  bool operator==(const StaticVerdict&) const = default;
};

}  // namespace autosafe

#endif  // AUTOSAFE_VERDICT_HPP_
