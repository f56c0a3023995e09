// Copyright 2026 The bbtrain Authors
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

#ifndef BBTRAIN_CLI_H_
#define BBTRAIN_CLI_H_

#include <ostream>
#include <string>
#include <vector>

namespace bbtrain {

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;
inline constexpr int kExitIo = 3;

// Entry point behind the `bbtrain` binary. `args` excludes the program name.
// Subcommands: generate, run, train, inspect, experiment.
int Dispatch(const std::vector<std::string>& args, std::ostream& out,
             std::ostream& err);

}  // namespace bbtrain

#endif  // BBTRAIN_CLI_H_
