// Copyright 2026 The iacsmell Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "iacsmell/ir.hpp"
#include "iacsmell/rules.hpp"

namespace iacsmell::cli {

inline constexpr int kExitClean = 0;
inline constexpr int kExitFindings = 1;
inline constexpr int kExitError = 2;

inline constexpr const char* kConfigEnv = "IACSMELL_CONFIG";

// --config wins over $IACSMELL_CONFIG, which wins over the built-in lists.
rules::RuleConfig resolve_rule_config(const std::optional<std::string>& config_path);

// Entry point shared by the executable and the tests. args[0] is the
// program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace iacsmell::cli
