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

#include "autosafe/serialization.hpp"

namespace autosafe {

using nlohmann::json;

namespace {

template <typename T, typename Parse>
T parse_enum(const json& j, Parse parse, const char* what) {
  auto v = parse(j.get<std::string>());
  if (!v) throw ParseError(0, std::string("unknown ") + what + " '" + j.get<std::string>() + "'");
  return *v;
}

template <typename T, typename F>
json array_of(const std::vector<T>& items, F f) {
  json arr = json::array();
  for (const auto& item : items) arr.push_back(f(item));
  return arr;
}

template <typename T, typename F>
std::vector<T> vector_from(const json& arr, F f) {
  std::vector<T> out;
  for (const auto& item : arr) out.push_back(f(item));
  return out;
}

template <typename F>
auto wrap(F f) -> decltype(f()) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw ParseError(0, e.what());
  }
}

}  // namespace

json to_json(const MutationRecord& record) {
  json j = {{"strategy", std::string(to_string(record.strategy))},
            {"parameter", record.parameter},
            {"element", record.element}};
  if (record.inner) j["inner"] = std::string(to_string(*record.inner));
  return j;
}

MutationRecord mutation_record_from_json(const json& j) {
  return wrap([&] {
    MutationRecord r;
    r.strategy = parse_enum<MutationStrategy>(j.at("strategy"), parse_mutation_strategy, "strategy");
    r.parameter = j.at("parameter").get<int>();
    r.element = j.at("element").get<int>();
    if (j.contains("inner")) {
      r.inner = parse_enum<MutationStrategy>(j.at("inner"), parse_mutation_strategy, "strategy");
    }
    return r;
  });
}

json input_to_json(const InputTuple& input) {
  json kinds = json::array();
  for (const auto& v : input.values) kinds.push_back(std::string(to_string(v.kind())));
  json origin;
  if (const auto* seed = std::get_if<SeedOrigin>(&input.origin)) {
    origin = {{"seed", seed->index}};
  } else {
    const auto& m = std::get<MutatedOrigin>(input.origin);
    origin = {{"parent", m.parent_id}, {"iteration", m.iteration}, {"mutation", to_json(m.mutation)}};
  }
  return {{"id", input.id}, {"args", to_json(input)}, {"kinds", kinds}, {"origin", origin}};
}

InputTuple input_from_json(const json& j) {
  return wrap([&] {
    InputTuple t;
    t.id = j.at("id").get<std::uint64_t>();
    const auto& args = j.at("args");
    const auto& kinds = j.at("kinds");
    if (!args.is_array() || !kinds.is_array() || args.size() != kinds.size()) {
      throw ParseError(0, "input args and kinds differ in length");
    }
    for (std::size_t i = 0; i < args.size(); ++i) {
      auto kind = parse_enum<FuzzKind>(kinds[i], parse_fuzz_kind, "kind");
      t.values.push_back(fuzz_value_from_json(args[i], kind));
    }
    const auto& origin = j.at("origin");
    if (origin.contains("seed")) {
      t.origin = SeedOrigin{origin.at("seed").get<std::size_t>()};
    } else {
      t.origin = MutatedOrigin{origin.at("parent").get<std::uint64_t>(),
                               origin.at("iteration").get<std::size_t>(),
                               mutation_record_from_json(origin.at("mutation"))};
    }
    return t;
  });
}

json to_json(const CandidateCode& code) {
  return {{"version", code.version},
          {"provenance",
           {{"kind", std::string(to_string(code.provenance.kind))}, {"round", code.provenance.round}}},
          {"source", code.source}};
}

CandidateCode candidate_from_json(const json& j, const std::string& task_id) {
  return wrap([&] {
    CandidateCode c;
    c.task_id = task_id;
    c.version = j.at("version").get<int>();
    c.provenance.kind =
        parse_enum<ProvenanceKind>(j.at("provenance").at("kind"), parse_provenance_kind, "provenance");
    c.provenance.round = j.at("provenance").at("round").get<int>();
    c.source = j.at("source").get<std::string>();
    return c;
  });
}

json to_json(const StaticVerdict& verdict) {
  return {{"secure", verdict.secure},
          {"findings", array_of(verdict.findings,
                                [](const Finding& f) {
                                  return json{{"cwe_id", f.cwe_id},
                                              {"description", f.description},
                                              {"remediation", f.remediation}};
                                })},
          {"raw_reply", verdict.raw_reply}};
}

StaticVerdict verdict_from_json(const json& j) {
  return wrap([&] {
    StaticVerdict v;
    v.secure = j.at("secure").get<bool>();
    v.findings = vector_from<Finding>(j.at("findings"), [](const json& f) {
      return Finding{f.at("cwe_id").get<std::string>(), f.at("description").get<std::string>(),
                     f.at("remediation").get<std::string>()};
    });
    v.raw_reply = j.at("raw_reply").get<std::string>();
    return v;
  });
}

json to_json(const StaticLoopTrace& trace) {
  json j = {{"rounds_used", trace.rounds_used},
            {"resolved", trace.resolved},
            {"final_version", trace.final_version},
            {"verdicts", array_of(trace.verdicts, [](const StaticVerdict& v) { return to_json(v); })}};
  if (trace.parse_failure) j["parse_failure"] = *trace.parse_failure;
  if (trace.parse_failure_reply) j["parse_failure_reply"] = *trace.parse_failure_reply;
  return j;
}

StaticLoopTrace static_trace_from_json(const json& j) {
  return wrap([&] {
    StaticLoopTrace t;
    t.rounds_used = j.at("rounds_used").get<int>();
    t.resolved = j.at("resolved").get<bool>();
    t.final_version = j.at("final_version").get<int>();
    t.verdicts = vector_from<StaticVerdict>(j.at("verdicts"), verdict_from_json);
    if (j.contains("parse_failure")) t.parse_failure = j.at("parse_failure").get<std::string>();
    if (j.contains("parse_failure_reply")) {
      t.parse_failure_reply = j.at("parse_failure_reply").get<std::string>();
    }
    return t;
  });
}

json to_json(const CrashReport& crash) {
  return {{"input", input_to_json(crash.input)},
          {"classification", std::string(to_string(crash.classification))},
          {"error_class", crash.error_class},
          {"error_message", crash.error_message},
          {"iteration_found", crash.iteration_found},
          {"top_frame", crash.top_frame}};
}

CrashReport crash_from_json(const json& j) {
  return wrap([&] {
    CrashReport c;
    c.input = input_from_json(j.at("input"));
    c.classification =
        parse_enum<Classification>(j.at("classification"), parse_classification, "classification");
    c.error_class = j.at("error_class").get<std::string>();
    c.error_message = j.at("error_message").get<std::string>();
    c.iteration_found = j.at("iteration_found").get<std::size_t>();
    c.top_frame = j.at("top_frame").get<std::string>();
    return c;
  });
}

json to_json(const FuzzOutcome& outcome) {
  json j = {{"executions_run", outcome.executions_run},
            {"seeds_used", outcome.seeds_used},
            {"clean", outcome.clean},
            {"setup_error", outcome.setup_error},
            {"crashes", array_of(outcome.crashes, [](const CrashReport& c) { return to_json(c); })}};
  if (outcome.setup_error) j["setup_detail"] = outcome.setup_detail;
  return j;
}

FuzzOutcome fuzz_outcome_from_json(const json& j) {
  return wrap([&] {
    FuzzOutcome o;
    o.executions_run = j.at("executions_run").get<std::size_t>();
    o.seeds_used = j.at("seeds_used").get<std::size_t>();
    o.clean = j.at("clean").get<bool>();
    o.setup_error = j.at("setup_error").get<bool>();
    o.crashes = vector_from<CrashReport>(j.at("crashes"), crash_from_json);
    if (j.contains("setup_detail")) o.setup_detail = j.at("setup_detail").get<std::string>();
    return o;
  });
}

json to_json(const FuzzLoopTrace& trace) {
  json rounds = json::array();
  for (const auto& r : trace.rounds) {
    json jr = {{"round", r.round}, {"code_version", r.code_version}};
    if (r.regression_passed) {
      jr["regression_passed"] = *r.regression_passed;
      jr["regression_failures"] =
          array_of(r.regression_failures, [](const CrashReport& c) { return to_json(c); });
    }
    if (r.outcome) jr["outcome"] = to_json(*r.outcome);
    rounds.push_back(std::move(jr));
  }
  return {{"status", std::string(to_string(trace.status))},
          {"rounds_used", trace.rounds_used},
          {"seeds", array_of(trace.seeds, input_to_json)},
          {"seeds_from_fallback", trace.seeds_from_fallback},
          {"seeds_rejected", trace.seeds_rejected},
          {"rounds", rounds}};
}

FuzzLoopTrace fuzz_trace_from_json(const json& j) {
  return wrap([&] {
    FuzzLoopTrace t;
    t.status = parse_enum<FuzzStatus>(j.at("status"), parse_fuzz_status, "fuzz status");
    t.rounds_used = j.at("rounds_used").get<int>();
    t.seeds = vector_from<InputTuple>(j.at("seeds"), input_from_json);
    t.seeds_from_fallback = j.at("seeds_from_fallback").get<bool>();
    t.seeds_rejected = j.at("seeds_rejected").get<std::size_t>();
    for (const auto& jr : j.at("rounds")) {
      FuzzRound r;
      r.round = jr.at("round").get<int>();
      r.code_version = jr.at("code_version").get<int>();
      if (jr.contains("regression_passed")) {
        r.regression_passed = jr.at("regression_passed").get<bool>();
        r.regression_failures =
            vector_from<CrashReport>(jr.at("regression_failures"), crash_from_json);
      }
      if (jr.contains("outcome")) r.outcome = fuzz_outcome_from_json(jr.at("outcome"));
      t.rounds.push_back(std::move(r));
    }
    return t;
  });
}

json to_json(const TaskTrace& trace) {
  json j = {{"task_id", trace.task_id},
            {"final_status", std::string(to_string(trace.final_status))},
            {"code_versions",
             array_of(trace.code_versions, [](const CandidateCode& c) { return to_json(c); })},
            {"static", trace.static_trace ? to_json(*trace.static_trace) : json(nullptr)},
            {"fuzz", trace.fuzz_trace ? to_json(*trace.fuzz_trace) : json(nullptr)}};
  if (trace.final_status == FinalStatus::kPipelineError) j["error"] = trace.error;
  if (trace.functional) j["functional"] = {{"passed", trace.functional->passed}};
  if (trace.timings) {
    j["timings_ms"] = {{"generate", trace.timings->generate.count()},
                       {"static", trace.timings->static_loop.count()},
                       {"fuzz", trace.timings->fuzz.count()},
                       {"functional", trace.timings->functional.count()}};
  }
  return j;
}

TaskTrace task_trace_from_json(const json& j) {
  return wrap([&] {
    TaskTrace t;
    t.task_id = j.at("task_id").get<std::string>();
    t.final_status = parse_enum<FinalStatus>(j.at("final_status"), parse_final_status, "status");
    for (const auto& c : j.at("code_versions")) t.code_versions.push_back(candidate_from_json(c, t.task_id));
    if (!j.at("static").is_null()) t.static_trace = static_trace_from_json(j.at("static"));
    if (!j.at("fuzz").is_null()) t.fuzz_trace = fuzz_trace_from_json(j.at("fuzz"));
    if (j.contains("error")) t.error = j.at("error").get<std::string>();
    if (j.contains("functional")) {
      t.functional = FunctionalResult{j.at("functional").at("passed").get<std::vector<bool>>()};
    }
    if (j.contains("timings_ms")) {
      const auto& tm = j.at("timings_ms");
      using std::chrono::milliseconds;
      t.timings = PhaseTimings{milliseconds(tm.at("generate").get<long long>()),
                               milliseconds(tm.at("static").get<long long>()),
                               milliseconds(tm.at("fuzz").get<long long>()),
                               milliseconds(tm.at("functional").get<long long>())};
    }
    return t;
  });
}

json to_json(const SummaryReport& report) {
  json hist = json::object();
  for (const auto& [rounds, count] : report.static_fix_histogram) hist[std::to_string(rounds)] = count;
  hist["unable"] = report.static_unable;
  json status = json::object();
  for (const auto& [s, count] : report.final_status) status[std::string(to_string(s))] = count;
  json j = {{"schema_version", kSummarySchemaVersion},
            {"task_count", report.task_count},
            {"static_fix_histogram", hist},
            {"static_parse_failures", report.static_parse_failures},
            {"fuzz_buckets",
             {{"NoCrash", report.fuzz_buckets.no_crash},
              {"Fixed", report.fuzz_buckets.fixed},
              {"Unfixed", report.fuzz_buckets.unfixed},
              {"SetupError", report.fuzz_buckets.setup_error}}},
            {"fuzz_reached", report.fuzz_reached},
            {"final_status", status}};
  if (report.pass_at_k) {
    json values = json::object();
    for (const auto& [k, v] : report.pass_at_k->values) values[std::to_string(k)] = v;
    j["pass_at_k"] = {{"n_samples", report.pass_at_k->n_samples},
                      {"tasks_evaluated", report.pass_at_k->tasks_evaluated},
                      {"values", values}};
  }
  if (report.external_vuln) {
    auto stats = [](const LabelStats& s) {
      return json{{"labeled", s.labeled},
                  {"vulnerable", s.vulnerable},
                  {"fraction", s.fraction ? json(*s.fraction) : json(nullptr)}};
    };
    json ext = {{"pipeline", stats(report.external_vuln->pipeline)}};
    if (report.external_vuln->baseline) ext["baseline"] = stats(*report.external_vuln->baseline);
    if (report.external_vuln->delta) ext["delta"] = *report.external_vuln->delta;
    j["external_vuln"] = std::move(ext);
  }
  return j;
}

std::string dump_pretty(const json& j) {
  return j.dump(2, ' ', false, json::error_handler_t::replace) + "\n";
}

std::string dump_line(const json& j) {
  return j.dump(-1, ' ', false, json::error_handler_t::replace);
}

}  // namespace autosafe
