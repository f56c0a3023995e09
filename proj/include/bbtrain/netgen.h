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

#ifndef BBTRAIN_NETGEN_H_
#define BBTRAIN_NETGEN_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "bbtrain/engine.h"
#include "bbtrain/network.h"
#include "bbtrain/rng.h"

namespace bbtrain {

// How trigger bands are assigned to generated rules.
enum class ThresholdMode {
  kFull01,          // [0, 1]
  kBand02To08,      // [0.2, 0.8]
  kRandom,          // two uniform draws, sorted
  kRandomMinSep05,  // uniform over pairs with upper - lower >= 0.5
};

std::string_view ThresholdModeName(ThresholdMode mode);
absl::StatusOr<ThresholdMode> ParseThresholdMode(std::string_view name);

struct GenSpec {
  int fact_count = 100;
  int rule_count = 100;
  int action_count = 0;
  double initial_weight = 0.5;
  ThresholdMode threshold_mode = ThresholdMode::kRandomMinSep05;
  double action_fire_probability = 0.0;
  uint64_t seed = 0;

  absl::Status Validate() const;
};

// Deterministic in `spec`: facts get uniform values, each rule draws two
// distinct inputs and an unconstrained output, every rule starts at
// (initial_weight, 1 - initial_weight), and actions go to uniformly chosen
// rules.
absl::StatusOr<Network> GenerateNetwork(const GenSpec& spec);

struct Scenario {
  FactId start;
  double start_value = 0.0;
  FactId end;
  double target = 0.0;
  bool valid = false;
  // The run that produced `target`; its timing is the "initial run" time.
  RunResult initial_run;
};

// Candidate pairs tried before a scenario is declared invalid.
inline constexpr int kPairSelectionAttempts = 100;

// Picks a start/end pair joined by a rule chain, assigns a uniform start
// value, runs the network once and takes the end value as the target. The
// network is left holding that run's fact values, which later serve as the
// reset state for training.
Scenario MakeScenario(Network& network, Rng& rng,
                      const RunOptions& options = {});

}  // namespace bbtrain

#endif  // BBTRAIN_NETGEN_H_
