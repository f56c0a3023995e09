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

#ifndef BBTRAIN_GRID_CONFIG_H_
#define BBTRAIN_GRID_CONFIG_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "bbtrain/netgen.h"

namespace bbtrain {

// One experimental condition: generator settings, training settings and the
// number of seeded trials.
struct Condition {
  int id = 0;
  std::string name;
  GenSpec gen;  // seed is derived per trial
  double velocity = 0.1;
  int iterations = 10;
  bool retain_best = false;
  int trials = 1000;
  uint64_t base_seed = 0;
};

// Baseline settings every sweep departs from: 100 facts, 100 rules with
// weights 0.5, no actions, 10 iterations at velocity 0.1, random trigger
// bands at least 0.5 wide.
Condition StandardCondition();

// Action-bearing baseline used when a sweep enables actions: 100 actions that
// always fire.
inline constexpr int kStandardActionCount = 100;
inline constexpr double kStandardFireProbability = 1.0;

// Single-axis sweeps (facts, rules, actions, iterations, velocity, trigger
// range, fire probability), the combined iteration grids against velocity,
// actions, fire probability and trigger range, and best-result retention at
// 100/250/500 iterations. Ids are assigned in order from 0.
std::vector<Condition> BuiltinGrid();

// Grid file: blocks of `key = value` lines separated by blank lines; '#'
// starts a comment. Every block starts from StandardCondition(). Keys:
//   fact_count rule_count action_count rule_weights trigger_range
//   action_fire_probability velocity iteration_count trials
// plus `name` and `retain_best`. Errors carry the line number.
absl::StatusOr<std::vector<Condition>> ParseGridConfig(std::string_view text);

}  // namespace bbtrain

#endif  // BBTRAIN_GRID_CONFIG_H_
