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

#ifndef BBTRAIN_ENGINE_H_
#define BBTRAIN_ENGINE_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "bbtrain/network.h"
#include "bbtrain/rng.h"

namespace bbtrain {

// How pending rules are scheduled during a run.
enum class RunMode {
  // One work list; newly enabled rules are appended and every pick is
  // uniform over everything pending.
  kWorkList,
  // Level-synchronized: the whole current level runs (shuffled) before the
  // rules fed by its outputs are collected into the next level.
  kLevels,
};

// Side effect of a fired action. Returns the fact it changed, if any.
using ActionEffect = std::function<std::optional<FactId>(Network&, Rng&)>;

// Simulation effect: sets one uniformly chosen fact to a uniform value.
std::optional<FactId> RandomizeRandomFact(Network& network, Rng& rng);

struct RunOptions {
  RunMode mode = RunMode::kWorkList;
  // When set, a fact changed by an action enqueues the rules reading it.
  bool actions_propagate = false;
  // Empty means RandomizeRandomFact.
  ActionEffect action_effect;
};

struct RunResult {
  double end_value = 0.0;
  size_t rules_executed = 0;
  size_t actions_fired = 0;
  int64_t elapsed_ns = 0;

  // Timing is excluded.
  bool SameOutcome(const RunResult& other) const {
    return end_value == other.end_value &&
           rules_executed == other.rules_executed &&
           actions_fired == other.actions_fired;
  }
};

struct RuleOutcome {
  double result = 0.0;
  bool applied = false;
};

// Weighted sum of the rule's inputs, gated by its [lower, upper] band.
RuleOutcome EvaluateRule(const Rule& rule, std::span<const double> facts);

// Fires each of the rule's actions independently with its probability, in
// attachment order. Facts changed by fired effects are appended to `changed`
// when it is non-null. Returns the number fired.
size_t FireActions(const Rule& rule, Network& network, Rng& rng,
                   const RunOptions& options = {},
                   std::vector<FactId>* changed = nullptr);

// Sets `start` to `start_value`, then executes rules reachable from it. Each
// rule runs at most once; a rule whose result lands inside its band sets its
// output fact, fires its actions and enqueues the rules reading that output.
// Returns the value of `end` once nothing is pending.
absl::StatusOr<RunResult> Run(Network& network, FactId start,
                              double start_value, FactId end, Rng& rng,
                              const RunOptions& options = {});

}  // namespace bbtrain

#endif  // BBTRAIN_ENGINE_H_
