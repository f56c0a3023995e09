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

#ifndef BBTRAIN_NETWORK_H_
#define BBTRAIN_NETWORK_H_

#include <compare>
#include <cstdint>
#include <ostream>
#include <span>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace bbtrain {

// Dense per-kind identifier. Ids are indices into the owning network's
// storage and are never reused.
template <typename Tag>
class Id {
 public:
  constexpr Id() = default;
  constexpr explicit Id(uint32_t value) : value_(value) {}

  constexpr uint32_t value() const { return value_; }
  constexpr size_t index() const { return value_; }

  friend constexpr auto operator<=>(Id, Id) = default;
  friend std::ostream& operator<<(std::ostream& os, Id id) {
    return os << id.value_;
  }

 private:
  uint32_t value_ = 0;
};

using FactId = Id<struct FactTag>;
using RuleId = Id<struct RuleTag>;
using ActionId = Id<struct ActionTag>;

// Maximum drift tolerated between w1 + w2 and 1.
inline constexpr double kWeightSumTolerance = 1e-9;

// Which of a rule's two input positions a fact occupies.
enum class InputSlot : uint8_t { kFirst = 1, kSecond = 2 };

struct Rule {
  RuleId id;
  FactId input1;
  FactId input2;
  double weight1 = 0.5;
  double weight2 = 0.5;
  FactId output;
  double lower = 0.0;
  double upper = 1.0;
  std::vector<ActionId> actions;

  FactId input(InputSlot slot) const {
    return slot == InputSlot::kFirst ? input1 : input2;
  }
  double weight(InputSlot slot) const {
    return slot == InputSlot::kFirst ? weight1 : weight2;
  }
  FactId other_input(InputSlot slot) const {
    return slot == InputSlot::kFirst ? input2 : input1;
  }

  // Total weight `fact` carries into this rule's output: the sum over the
  // slots it occupies (both when input1 == input2), 0 if it is not an input.
  double InputWeight(FactId fact) const;

  bool HasInput(FactId fact) const { return input1 == fact || input2 == fact; }

  friend bool operator==(const Rule&, const Rule&) = default;
};

struct Action {
  ActionId id;
  RuleId rule;
  double fire_probability = 1.0;

  friend bool operator==(const Action&, const Action&) = default;
};

// Fact values of a network at one point in time.
struct FactSnapshot {
  std::vector<double> values;
};

// Per-rule first weight; second weights are complements.
struct WeightSnapshot {
  std::vector<double> weight1;
};

// The rule-fact-action graph. Facts hold scalars in [0, 1]; every rule has
// two weighted inputs summing to 1, one output and a [lower, upper] trigger
// band. Mutators validate their arguments so the invariants hold at every
// observable point.
class Network {
 public:
  Network() = default;
  explicit Network(uint64_t rng_seed) : rng_seed_(rng_seed) {}

  absl::StatusOr<FactId> AddFact(double value);

  // Creates a rule with weight2 = 1 - weight1.
  absl::StatusOr<RuleId> AddRule(FactId input1, double weight1, FactId input2,
                                 FactId output, double lower, double upper);

  // Creates an action and attaches it to `rule` (appended to its list).
  absl::StatusOr<ActionId> AddAction(RuleId rule, double fire_probability);

  size_t fact_count() const { return facts_.size(); }
  size_t rule_count() const { return rules_.size(); }
  size_t action_count() const { return actions_.size(); }

  bool HasFact(FactId id) const { return id.index() < facts_.size(); }
  bool HasRule(RuleId id) const { return id.index() < rules_.size(); }
  bool HasAction(ActionId id) const { return id.index() < actions_.size(); }

  double fact_value(FactId id) const { return facts_[id.index()]; }
  std::span<const double> fact_values() const { return facts_; }
  absl::Status SetFactValue(FactId id, double value);

  const Rule& rule(RuleId id) const { return rules_[id.index()]; }
  std::span<const Rule> rules() const { return rules_; }
  const Action& action(ActionId id) const { return actions_[id.index()]; }
  std::span<const Action> actions() const { return actions_; }

  // Rules with `fact` among their inputs, ascending by id, each listed once.
  std::span<const RuleId> RulesWithInput(FactId fact) const {
    return rules_by_input_[fact.index()];
  }

  // Sets the weight of `slot` to clamp(weight, 0, 1) and the other slot to
  // its complement.
  void SetSlotWeight(RuleId rule, InputSlot slot, double weight);

  uint64_t rng_seed() const { return rng_seed_; }
  void set_rng_seed(uint64_t seed) { rng_seed_ = seed; }

  FactSnapshot SnapshotFacts() const { return FactSnapshot{facts_}; }
  absl::Status RestoreFacts(const FactSnapshot& snapshot);

  WeightSnapshot SnapshotWeights() const;
  absl::Status RestoreWeights(const WeightSnapshot& snapshot);

  // Re-checks every structural and numeric invariant.
  absl::Status Validate() const;

  friend bool operator==(const Network&, const Network&) = default;

 private:
  std::vector<double> facts_;
  std::vector<Rule> rules_;
  std::vector<Action> actions_;
  std::vector<std::vector<RuleId>> rules_by_input_;
  uint64_t rng_seed_ = 0;
};

bool IsUnitInterval(double value);

}  // namespace bbtrain

#endif  // BBTRAIN_NETWORK_H_
