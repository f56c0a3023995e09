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

#ifndef BBTRAIN_NETFILE_H_
#define BBTRAIN_NETFILE_H_

#include <optional>
#include <string>
#include <string_view>

#include "absl/status/statusor.h"
#include "bbtrain/netgen.h"
#include "bbtrain/network.h"

namespace bbtrain {

// Text interchange format for networks (extension .bbn). One record per
// line, `kind key=value ...`:
//
//   bbn 1
//   rng algorithm=mt19937_64 seed=42
//   fact 0 0.5
//   rule 0 in1=0 w1=0.5 in2=1 out=2 lo=0 hi=1 actions=0,3
//   action 0 rule=0 p=1
//   scenario start=0 start_value=0.6 end=2 target=0.4 valid=1
//
// The `bbn 1` header is mandatory and comes first. Blank lines and lines
// starting with '#' are ignored. Ids are dense and must appear in order.
// A rule's `actions=` list must name exactly the actions declaring
// `rule=<id>`, ascending. Scalars are written in shortest round-trip form.
inline constexpr std::string_view kNetFileMagic = "bbn";
inline constexpr int kNetFileVersion = 1;

struct NetDocument {
  Network network;
  std::string rng_algorithm;
  std::optional<Scenario> scenario;
};

// Position of the first problem found while parsing.
struct Diagnostic {
  int line = 0;    // 1-based
  int column = 0;  // 1-based
  std::string token;
  std::string message;

  std::string ToString() const;
};

std::string SerializeNetwork(const Network& network,
                             const Scenario* scenario = nullptr);

// On failure returns InvalidArgument whose message is the diagnostic text,
// and fills `diagnostic` when provided.
absl::StatusOr<NetDocument> ParseNetFile(std::string_view text,
                                         Diagnostic* diagnostic = nullptr);

// Shortest decimal form that parses back to the same double.
std::string FormatScalar(double value);

}  // namespace bbtrain

#endif  // BBTRAIN_NETFILE_H_
