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

#ifndef AUTOSAFE_TOOLS_CLI_HPP_
#define AUTOSAFE_TOOLS_CLI_HPP_

#include <iosfwd>
#include <string>
#include <vector>

namespace autosafe::cli {

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitTaskFailures = 1;  // run: some task ended in PipelineError
inline constexpr int kExitConfig = 2;
inline constexpr int kExitCrashesFound = 3;  // fuzz-one
inline constexpr int kExitSetupError = 4;    // fuzz-one

// Entry point for `autosafe <subcommand> ...`. args[0] is the program name.
// Machine output goes to `out`, progress and diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace autosafe::cli

#endif  // AUTOSAFE_TOOLS_CLI_HPP_
