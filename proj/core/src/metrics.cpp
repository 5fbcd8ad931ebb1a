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

#include "autosafe/metrics.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace autosafe {

double pass_at_k(std::size_t n, std::size_t c, std::size_t k) {
  if (n == 0 || c > n || k < 1 || k > n) {
    throw DomainError("pass@k needs 0 <= c <= n and 1 <= k <= n (n=" + std::to_string(n) +
                      ", c=" + std::to_string(c) + ", k=" + std::to_string(k) + ")");
  }
  if (n - c < k) return 1.0;
  double miss = 1.0;
  for (std::size_t i = n - c + 1; i <= n; ++i) {
    miss *= 1.0 - static_cast<double>(k) / static_cast<double>(i);
  }
  return 1.0 - miss;
}

LabelSet parse_scanner_labels(std::string_view text, const std::set<std::string>* known_ids) {
  LabelSet labels;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t nl = text.find('\n', start);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(start, nl - start);
    start = nl + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    auto obj = nlohmann::json::parse(line, nullptr, false);
    if (obj.is_discarded() || !obj.is_object()) throw ParseError(line_no, "not a JSON object");
    auto id = obj.find("task_id");
    auto vuln = obj.find("vulnerable");
    if (id == obj.end() || !id->is_string()) throw ParseError(line_no, "needs string task_id");
    if (vuln == obj.end() || !vuln->is_boolean()) {
      throw ParseError(line_no, "needs boolean vulnerable");
    }
    std::string task_id = id->get<std::string>();
    if (known_ids && !known_ids->contains(task_id)) {
      labels.warnings.push_back("line " + std::to_string(line_no) + ": unknown task id '" +
                                task_id + "'");
      continue;
    }
    labels.vulnerable[task_id] = vuln->get<bool>();
  }
  return labels;
}

LabelSet ingest_scanner_labels(const std::filesystem::path& path,
                               const std::set<std::string>* known_ids) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileNotFound(path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scanner_labels(buf.str(), known_ids);
}

namespace {

LabelStats stats_of(const LabelSet& labels) {
  LabelStats s;
  s.labeled = labels.vulnerable.size();
  s.vulnerable = static_cast<std::size_t>(
      std::count_if(labels.vulnerable.begin(), labels.vulnerable.end(),
                    [](const auto& kv) { return kv.second; }));
  s.fraction = vulnerable_fraction(labels);
  return s;
}

}  // namespace

std::optional<double> vulnerable_fraction(const LabelSet& labels) {
  if (labels.vulnerable.empty()) return std::nullopt;
  std::size_t vulnerable = 0;
  for (const auto& [id, v] : labels.vulnerable) vulnerable += v ? 1 : 0;
  return static_cast<double>(vulnerable) / static_cast<double>(labels.vulnerable.size());
}

SummaryReport summarize(std::span<const TaskTrace> traces, const SummaryOptions& options) {
  SummaryReport report;
  report.task_count = traces.size();
  for (int r = 0; r <= options.histogram_max_rounds; ++r) report.static_fix_histogram[r] = 0;
  for (auto s : {FinalStatus::kCompleted, FinalStatus::kStaticUnresolved, FinalStatus::kFuzzUnfixed,
                 FinalStatus::kSetupError, FinalStatus::kPipelineError}) {
    report.final_status[s] = 0;
  }

  std::size_t n_samples = 0;
  std::vector<const FunctionalResult*> functional;
  for (const auto& t : traces) {
    ++report.final_status[t.final_status];
    if (t.static_trace && t.static_trace->resolved) {
      ++report.static_fix_histogram[t.static_trace->rounds_used];
    } else {
      ++report.static_unable;
    }
    if (t.static_trace && t.static_trace->parse_failure) ++report.static_parse_failures;
    if (t.fuzz_trace) {
      ++report.fuzz_reached;
      switch (t.fuzz_trace->status) {
        case FuzzStatus::kNoCrash:
          ++report.fuzz_buckets.no_crash;
          break;
        case FuzzStatus::kFixed:
          ++report.fuzz_buckets.fixed;
          break;
        case FuzzStatus::kUnfixed:
          ++report.fuzz_buckets.unfixed;
          break;
        case FuzzStatus::kSetupError:
          ++report.fuzz_buckets.setup_error;
          break;
      }
    }
    if (t.functional && t.functional->samples() > 0) {
      functional.push_back(&*t.functional);
      n_samples = std::max(n_samples, t.functional->samples());
    }
  }

  if (!functional.empty()) {
    PassAtKReport pk;
    pk.n_samples = n_samples;
    pk.tasks_evaluated = functional.size();
    for (std::size_t k : options.ks) {
      if (k < 1 || k > n_samples) continue;
      double sum = 0.0;
      std::size_t counted = 0;
      for (const auto* f : functional) {
        if (k > f->samples()) continue;
        sum += pass_at_k(f->samples(), f->passed_count(), k);
        ++counted;
      }
      if (counted > 0) pk.values[k] = sum / static_cast<double>(counted);
    }
    report.pass_at_k = std::move(pk);
  }

  if (options.labels) {
    ExternalVulnReport ext;
    ext.pipeline = stats_of(*options.labels);
    if (options.baseline_labels) {
      ext.baseline = stats_of(*options.baseline_labels);
      if (ext.baseline->fraction && ext.pipeline.fraction) {
        ext.delta = *ext.baseline->fraction - *ext.pipeline.fraction;
      }
    }
    report.external_vuln = std::move(ext);
  }
  return report;
}

}  // namespace autosafe
