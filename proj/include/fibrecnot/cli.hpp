// Copyright 2026 The fibrecnot Authors
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

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fibrecnot {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 1;
inline constexpr int kExitUsage = 2;

struct CommandOutcome {
  int exit_code = kExitOk;
  std::vector<std::string> artifacts;
  std::string summary;
};

/// Runs one CLI invocation. `args` excludes the program name. Diagnostics go to `err`,
/// everything else to `out`.
CommandOutcome run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fibrecnot
