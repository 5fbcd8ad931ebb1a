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

#ifndef AUTOSAFE_EMBEDDED_ASSETS_HPP_
#define AUTOSAFE_EMBEDDED_ASSETS_HPP_

#include <string_view>

// Text assets from core/assets, compiled in at build time.
namespace autosafe::assets {

extern const std::string_view k_codegen;
extern const std::string_view k_static_analyze;
extern const std::string_view k_seed_gen;
extern const std::string_view k_fix_from_static;
extern const std::string_view k_fix_from_fuzz;
extern const std::string_view k_harness;

}  // namespace autosafe::assets

#endif  // AUTOSAFE_EMBEDDED_ASSETS_HPP_
