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

#ifndef AUTOSAFE_METRICS_HPP_
#define AUTOSAFE_METRICS_HPP_

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "autosafe/error.hpp"
#include "autosafe/trace.hpp"

namespace autosafe {

class DomainError : public Error {
 public:
  using Error::Error;
};

// 1 - C(n-c, k) / C(n, k), computed as 1 - prod_{i=n-c+1}^{n} (1 - k/i).
// Requires 0 <= c <= n and 1 <= k <= n; throws DomainError otherwise.
double pass_at_k(std::size_t n, std::size_t c, std::size_t k);

struct LabelSet {
  std::map<std::string, bool> vulnerable;  // task id -> label
  std::vector<std::string> warnings;
};

// JSONL of {task_id, vulnerable}. When `known_ids` is given, labels for
// other ids are dropped with a warning. Throws FileNotFound, ParseError.
LabelSet ingest_scanner_labels(const std::filesystem::path& path,
                               const std::set<std::string>* known_ids = nullptr);
LabelSet parse_scanner_labels(std::string_view text,
                              const std::set<std::string>* known_ids = nullptr);

// Vulnerable share of the labelled tasks; nullopt when there are none.
std::optional<double> vulnerable_fraction(const LabelSet& labels);

struct FuzzBuckets {
  std::size_t no_crash = 0;
  std::size_t fixed = 0;
  std::size_t unfixed = 0;
  std::size_t setup_error = 0;
  std::size_t total() const { return no_crash + fixed + unfixed + setup_error; }
  bool operator==(const FuzzBuckets&) const = default;
};

struct PassAtKReport {
  std::size_t n_samples = 0;
  std::size_t tasks_evaluated = 0;
  std::map<std::size_t, double> values;  // k -> mean pass@k
  bool operator==(const PassAtKReport&) const = default;
};

struct LabelStats {
  std::size_t labeled = 0;
  std::size_t vulnerable = 0;
  std::optional<double> fraction;
  bool operator==(const LabelStats&) const = default;
};

struct ExternalVulnReport {
  LabelStats pipeline;
  std::optional<LabelStats> baseline;
  std::optional<double> delta;  // baseline fraction - pipeline fraction
  bool operator==(const ExternalVulnReport&) const = default;
};

inline constexpr int kSummarySchemaVersion = 1;

struct SummaryReport {
  std::size_t task_count = 0;
  // Resolved tasks by fix rounds used. Keys 0..4 are always present.
  std::map<int, std::size_t> static_fix_histogram;
  // Unresolved loops, parse failures and tasks that never reached the loop.
  std::size_t static_unable = 0;
  std::size_t static_parse_failures = 0;
  FuzzBuckets fuzz_buckets;
  std::size_t fuzz_reached = 0;
  std::map<FinalStatus, std::size_t> final_status;
  std::optional<PassAtKReport> pass_at_k;
  std::optional<ExternalVulnReport> external_vuln;
  bool operator==(const SummaryReport&) const = default;
};

struct SummaryOptions {
  int histogram_max_rounds = 4;
  std::vector<std::size_t> ks = {1, 5, 10};
  std::optional<LabelSet> labels;
  std::optional<LabelSet> baseline_labels;
};

SummaryReport summarize(std::span<const TaskTrace> traces, const SummaryOptions& options = {});

}  // namespace autosafe

#endif  // AUTOSAFE_METRICS_HPP_
