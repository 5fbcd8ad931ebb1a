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

#include "autosafe/fuzzing_agent.hpp"

#include <map>

#include <nlohmann/json.hpp>

#include "autosafe/mutation.hpp"
#include "autosafe/python_source.hpp"

namespace autosafe {

namespace {

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t nl = text.find('\n', start);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(start, nl - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    start = nl + 1;
  }
  return lines;
}

std::string_view trim_view(std::string_view s) {
  std::size_t a = s.find_first_not_of(" \t");
  if (a == std::string_view::npos) return {};
  std::size_t b = s.find_last_not_of(" \t");
  return s.substr(a, b - a + 1);
}

bool is_dotted_name(std::string_view s) {
  if (s.empty()) return false;
  bool start = true;
  for (char c : s) {
    if (c == '.') {
      if (start) return false;
      start = true;
      continue;
    }
    const bool alpha = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
    const bool digit = c >= '0' && c <= '9';
    if (!alpha && !(digit && !start)) return false;
    start = false;
  }
  return !start;
}

std::string class_of(std::string_view exception_line) {
  std::size_t colon = exception_line.find(':');
  std::string_view head = colon == std::string_view::npos ? exception_line
                                                          : exception_line.substr(0, colon);
  head = trim_view(head);
  return is_dotted_name(head) ? std::string(head) : std::string();
}

}  // namespace

ParsedTraceback parse_traceback(std::string_view stderr_text) {
  ParsedTraceback parsed;
  auto lines = split_lines(stderr_text);
  while (!lines.empty() && trim_view(lines.back()).empty()) lines.pop_back();
  if (lines.empty()) return parsed;

  // The last frame header marks the innermost frame of the last traceback;
  // the exception display starts at the first unindented line after it.
  std::optional<std::size_t> frame;
  for (std::size_t i = lines.size(); i-- > 0;) {
    if (lines[i].starts_with("  File \"")) {
      frame = i;
      break;
    }
  }
  std::size_t first = lines.size() - 1;
  if (frame) {
    parsed.top_frame = std::string(trim_view(lines[*frame]));
    std::size_t i = *frame + 1;
    while (i < lines.size() && (lines[i].empty() || lines[i].front() == ' ')) ++i;
    if (i < lines.size()) first = i;
  }
  std::string message;
  for (std::size_t i = first; i < lines.size(); ++i) {
    if (i > first) message += '\n';
    message += lines[i];
  }
  parsed.error_message = std::move(message);
  parsed.error_class = class_of(lines[first]);
  return parsed;
}

CrashReport make_crash_report(const ExecutionResult& result, std::size_t iteration) {
  CrashReport report;
  report.input = result.input;
  report.classification = result.classification;
  report.iteration_found = iteration;
  if (result.classification == Classification::kTimeout) {
    report.error_class = "timeout";
    report.error_message = "execution exceeded the time limit";
    return report;
  }
  if (result.classification != Classification::kCrash) {
    throw ContractViolation("crash reports are only made for Crash or Timeout results");
  }
  ParsedTraceback tb = parse_traceback(result.stderr_tail);
  report.error_class = tb.error_class;
  report.error_message = tb.error_message;
  report.top_frame = tb.top_frame;
  if (report.error_class.empty()) {
    if (result.exit_code && *result.exit_code < 0) {
      report.error_class = "signal " + std::to_string(-*result.exit_code);
    } else {
      report.error_class = "exit " + std::to_string(result.exit_code.value_or(-1));
    }
    if (report.error_message.empty()) report.error_message = report.error_class;
  }
  return report;
}

InputTuple default_seed(const TypeSignature& types) {
  InputTuple t;
  for (auto k : types) t.values.push_back(FuzzValue::default_for(k));
  return t;
}

SeedSet parse_seed_reply(std::string_view reply, const std::optional<TypeSignature>& types) {
  SeedSet set;
  nlohmann::json array;
  std::vector<std::string> attempts{std::string(reply)};
  try {
    attempts.push_back(extract_code_block(reply));
  } catch (const EmptyReply&) {
  }
  if (auto open = reply.find('['), close = reply.rfind(']');
      open != std::string_view::npos && close != std::string_view::npos && close > open) {
    attempts.emplace_back(reply.substr(open, close - open + 1));
  }
  for (const auto& text : attempts) {
    auto parsed = nlohmann::json::parse(text, nullptr, false);
    if (!parsed.is_discarded() && parsed.is_array()) {
      array = std::move(parsed);
      break;
    }
  }
  if (!array.is_array()) return set;

  std::optional<std::size_t> arity;
  if (types) arity = types->size();
  std::vector<InputTuple> accepted;
  for (const auto& entry : array) {
    if (!entry.is_array() || (arity && entry.size() != *arity)) {
      ++set.rejected;
      continue;
    }
    InputTuple t;
    try {
      for (std::size_t i = 0; i < entry.size(); ++i) {
        t.values.push_back(fuzz_value_from_json(
            entry[i], types ? std::optional<FuzzKind>((*types)[i]) : std::nullopt));
      }
    } catch (const std::exception&) {
      ++set.rejected;
      continue;
    }
    if (!types && !accepted.empty()) {
      accepted.push_back(t);
      try {
        infer_types(accepted);
      } catch (const ConflictingTypes&) {
        accepted.pop_back();
        ++set.rejected;
        continue;
      }
      accepted.pop_back();
    }
    arity = t.arity();
    accepted.push_back(std::move(t));
  }
  if (!accepted.empty() && !types) {
    const TypeSignature sig = infer_types(accepted);
    for (auto& t : accepted) {
      for (std::size_t i = 0; i < t.values.size(); ++i) t.values[i] = *coerce_to(t.values[i], sig[i]);
    }
  }
  for (std::size_t i = 0; i < accepted.size(); ++i) {
    accepted[i].origin = SeedOrigin{i};
  }
  set.seeds = std::move(accepted);
  return set;
}

SeedSet FuzzingAgent::generate_seeds(const TaskSpec& task, std::optional<std::size_t> code_arity) {
  if ((code_arity && *code_arity == 0) || (task.param_types && task.param_types->empty())) {
    SeedSet set;
    set.seeds.push_back(InputTuple{});
    return set;
  }
  std::string types_text = "unknown";
  if (task.param_types) {
    types_text.clear();
    for (auto k : *task.param_types) {
      if (!types_text.empty()) types_text += ", ";
      types_text += to_string(k);
    }
  }
  std::string prompt = prompts_.render(TemplateId::kSeedGen,
                                       {{"requirements", task.prompt},
                                        {"entry_point", task.entry_point},
                                        {"param_types", types_text},
                                        {"seed_count", std::to_string(seed_count_)}});
  std::string reply =
      client_.complete(make_request(settings_, TemplateId::kSeedGen, std::move(prompt), task.id));
  SeedSet set = parse_seed_reply(reply, task.param_types);
  if (set.seeds.empty()) {
    if (!task.param_types) throw NoTypesAvailable(task.id);
    set.seeds.push_back(default_seed(*task.param_types));
    set.from_fallback = true;
  }
  return set;
}

FuzzOutcome fuzz_bundle(const Sandbox& sandbox, const ProgramBundle& bundle,
                        std::span<const InputTuple> seeds, std::size_t budget, Rng& rng) {
  FuzzOutcome out;
  std::map<std::string, std::size_t> seen;
  // Returns false when the loop must stop.
  auto observe = [&](const ExecutionResult& r, std::size_t iteration) {
    ++out.executions_run;
    switch (r.classification) {
      case Classification::kOk:
        return true;
      case Classification::kSetupError:
        out.setup_error = true;
        out.setup_detail = r.stderr_tail;
        return false;
      case Classification::kCrash:
      case Classification::kTimeout: {
        CrashReport report = make_crash_report(r, iteration);
        if (seen.emplace(report.dedup_key(), out.crashes.size()).second) {
          out.crashes.push_back(std::move(report));
        }
        return true;
      }
    }
    return true;
  };

  std::vector<InputTuple> pool;
  std::uint64_t next_id = 1;
  if (seeds.empty()) {
    pool.push_back(InputTuple{});
  } else {
    pool.assign(seeds.begin(), seeds.end());
  }
  for (auto& seed : pool) seed.id = next_id++;
  const bool zero_arity = pool.front().arity() == 0;

  for (const auto& seed : pool) {
    ++out.seeds_used;
    if (!observe(sandbox.execute(bundle, seed), 0)) {
      out.clean = false;
      return out;
    }
    if (zero_arity) break;
  }
  if (!zero_arity) {
    std::size_t cursor = 0;
    for (std::size_t it = 1; it <= budget; ++it) {
      const InputTuple& parent = pool[cursor++ % pool.size()];
      InputTuple child = mutate_tuple(parent, rng, it);
      child.id = next_id++;
      ExecutionResult r = sandbox.execute(bundle, child);
      const bool ok = r.classification == Classification::kOk;
      if (!observe(r, it)) break;
      if (ok) pool.push_back(std::move(child));
    }
  }
  out.clean = out.crashes.empty() && !out.setup_error;
  return out;
}

FuzzOutcome fuzz(const Sandbox& sandbox, const CandidateCode& code, const TaskSpec& task,
                 std::span<const InputTuple> seeds, std::size_t budget, Rng& rng) {
  ProgramBundle bundle;
  try {
    bundle = assemble_program(code, task);
  } catch (const python::EntryPointNotFound& e) {
    FuzzOutcome out;
    out.setup_error = true;
    out.setup_detail = e.what();
    return out;
  } catch (const python::SyntaxUnparseable& e) {
    FuzzOutcome out;
    out.setup_error = true;
    out.setup_detail = e.what();
    return out;
  }
  return fuzz_bundle(sandbox, bundle, seeds, budget, rng);
}

RegressionResult run_regression(const Sandbox& sandbox, const CandidateCode& code,
                                const TaskSpec& task, std::span<const InputTuple> failing_inputs) {
  if (failing_inputs.empty()) throw ContractViolation("regression check needs failing inputs");
  RegressionResult result;
  ProgramBundle bundle;
  try {
    bundle = assemble_program(code, task);
  } catch (const python::EntryPointNotFound&) {
    result.setup_error = true;
    return result;
  } catch (const python::SyntaxUnparseable&) {
    result.setup_error = true;
    return result;
  }
  for (const auto& input : failing_inputs) {
    ExecutionResult r = sandbox.execute(bundle, input);
    if (r.classification == Classification::kSetupError) {
      result.setup_error = true;
      return result;
    }
    if (r.classification != Classification::kOk) {
      result.still_failing.push_back(make_crash_report(r, 0));
    }
  }
  result.passed = result.still_failing.empty();
  return result;
}

bool regression_check(const Sandbox& sandbox, const CandidateCode& code, const TaskSpec& task,
                      std::span<const InputTuple> failing_inputs) {
  return run_regression(sandbox, code, task, failing_inputs).passed;
}

std::string_view to_string(FuzzStatus status) {
  switch (status) {
    case FuzzStatus::kNoCrash:
      return "NoCrash";
    case FuzzStatus::kFixed:
      return "Fixed";
    case FuzzStatus::kUnfixed:
      return "Unfixed";
    case FuzzStatus::kSetupError:
      return "SetupError";
  }
  return "Unfixed";
}

std::optional<FuzzStatus> parse_fuzz_status(std::string_view text) {
  for (auto s : {FuzzStatus::kNoCrash, FuzzStatus::kFixed, FuzzStatus::kUnfixed,
                 FuzzStatus::kSetupError}) {
    if (to_string(s) == text) return s;
  }
  return std::nullopt;
}

namespace {

std::vector<InputTuple> inputs_of(const std::vector<CrashReport>& crashes) {
  std::vector<InputTuple> inputs;
  for (const auto& c : crashes) inputs.push_back(c.input);
  return inputs;
}

}  // namespace

void run_fuzz_fix_loop(const Sandbox& sandbox, const CandidateCode& code, const TaskSpec& task,
                       std::span<const InputTuple> seeds, const FuzzLoopConfig& config,
                       CodingAgent& coder, Rng& rng, FuzzLoopResult& out) {
  if (config.max_fuzz_rounds < 0) throw ContractViolation("max_fuzz_rounds must be >= 0");
  out.code = code;
  out.revisions.clear();
  out.trace.seeds.assign(seeds.begin(), seeds.end());
  out.trace.rounds.clear();
  out.trace.rounds_used = 0;

  FuzzRound first;
  first.code_version = code.version;
  first.outcome = fuzz(sandbox, code, task, seeds, config.budget, rng);
  out.trace.rounds.push_back(first);
  if (first.outcome->setup_error) {
    out.trace.status = FuzzStatus::kSetupError;
    return;
  }
  if (first.outcome->clean) {
    out.trace.status = FuzzStatus::kNoCrash;
    return;
  }
  std::vector<CrashReport> crashes = first.outcome->crashes;
  for (int round = 1; round <= config.max_fuzz_rounds; ++round) {
    out.code = coder.revise_with_fuzz_feedback(task, out.code, crashes, round);
    out.revisions.push_back(out.code);
    out.trace.rounds_used = round;

    FuzzRound r;
    r.round = round;
    r.code_version = out.code.version;
    RegressionResult reg = run_regression(sandbox, out.code, task, inputs_of(crashes));
    r.regression_passed = reg.passed;
    r.regression_failures = reg.still_failing;
    if (reg.setup_error) {
      out.trace.rounds.push_back(std::move(r));
      out.trace.status = FuzzStatus::kSetupError;
      return;
    }
    if (!reg.passed) {
      crashes = reg.still_failing;
      out.trace.rounds.push_back(std::move(r));
      continue;
    }
    r.outcome = fuzz(sandbox, out.code, task, seeds, config.budget, rng);
    const FuzzOutcome& outcome = *r.outcome;
    out.trace.rounds.push_back(r);
    if (outcome.setup_error) {
      out.trace.status = FuzzStatus::kSetupError;
      return;
    }
    if (outcome.clean) {
      out.trace.status = FuzzStatus::kFixed;
      return;
    }
    crashes = outcome.crashes;
  }
  out.trace.status = FuzzStatus::kUnfixed;
}

FuzzLoopResult fuzz_fix_loop(const Sandbox& sandbox, const CandidateCode& code,
                             const TaskSpec& task, std::span<const InputTuple> seeds,
                             const FuzzLoopConfig& config, CodingAgent& coder, Rng& rng) {
  FuzzLoopResult result;
  run_fuzz_fix_loop(sandbox, code, task, seeds, config, coder, rng, result);
  return result;
}

}  // namespace autosafe
