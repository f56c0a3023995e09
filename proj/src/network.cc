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

#include "bbtrain/network.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"

namespace bbtrain {

bool IsUnitInterval(double value) { return value >= 0.0 && value <= 1.0; }

double Rule::InputWeight(FactId fact) const {
  double weight = 0.0;
  if (input1 == fact) weight += weight1;
  if (input2 == fact) weight += weight2;
  return weight;
}

absl::StatusOr<FactId> Network::AddFact(double value) {
  if (!IsUnitInterval(value)) {
    return absl::InvalidArgumentError(
        absl::StrCat("fact value ", value, " outside [0, 1]"));
  }
  if (facts_.size() >= std::numeric_limits<uint32_t>::max()) {
    return absl::ResourceExhaustedError("too many facts");
  }
  const FactId id(static_cast<uint32_t>(facts_.size()));
  facts_.push_back(value);
  rules_by_input_.emplace_back();
  return id;
}

absl::StatusOr<RuleId> Network::AddRule(FactId input1, double weight1,
                                        FactId input2, FactId output,
                                        double lower, double upper) {
  for (FactId fact : {input1, input2, output}) {
    if (!HasFact(fact)) {
      return absl::NotFoundError(absl::StrCat("unknown fact ", fact.value()));
    }
  }
  if (!IsUnitInterval(weight1)) {
    return absl::InvalidArgumentError(
        absl::StrCat("weight ", weight1, " outside [0, 1]"));
  }
  if (!IsUnitInterval(lower) || !IsUnitInterval(upper)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "thresholds [", lower, ", ", upper, "] outside [0, 1]"));
  }
  if (lower > upper) {
    return absl::InvalidArgumentError(absl::StrCat(
        "lower threshold ", lower, " exceeds upper threshold ", upper));
  }
  const RuleId id(static_cast<uint32_t>(rules_.size()));
  Rule rule;
  rule.id = id;
  rule.input1 = input1;
  rule.input2 = input2;
  rule.weight1 = weight1;
  rule.weight2 = 1.0 - weight1;
  rule.output = output;
  rule.lower = lower;
  rule.upper = upper;
  rules_.push_back(std::move(rule));
  rules_by_input_[input1.index()].push_back(id);
  if (input2 != input1) rules_by_input_[input2.index()].push_back(id);
  return id;
}

absl::StatusOr<ActionId> Network::AddAction(RuleId rule,
                                            double fire_probability) {
  if (!HasRule(rule)) {
    return absl::NotFoundError(absl::StrCat("unknown rule ", rule.value()));
  }
  if (!IsUnitInterval(fire_probability)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "fire probability ", fire_probability, " outside [0, 1]"));
  }
  const ActionId id(static_cast<uint32_t>(actions_.size()));
  actions_.push_back(Action{id, rule, fire_probability});
  rules_[rule.index()].actions.push_back(id);
  return id;
}

absl::Status Network::SetFactValue(FactId id, double value) {
  if (!HasFact(id)) {
    return absl::NotFoundError(absl::StrCat("unknown fact ", id.value()));
  }
  if (!IsUnitInterval(value)) {
    return absl::InvalidArgumentError(
        absl::StrCat("fact value ", value, " outside [0, 1]"));
  }
  facts_[id.index()] = value;
  return absl::OkStatus();
}

void Network::SetSlotWeight(RuleId id, InputSlot slot, double weight) {
  Rule& rule = rules_[id.index()];
  const double clamped = std::clamp(weight, 0.0, 1.0);
  // weight2 is always derived from weight1 so snapshots and files that
  // store weight1 alone reproduce both exactly.
  rule.weight1 = slot == InputSlot::kFirst ? clamped : 1.0 - clamped;
  rule.weight2 = 1.0 - rule.weight1;
}

absl::Status Network::RestoreFacts(const FactSnapshot& snapshot) {
  if (snapshot.values.size() != facts_.size()) {
    return absl::FailedPreconditionError(
        absl::StrCat("snapshot holds ", snapshot.values.size(),
                     " facts but network has ", facts_.size()));
  }
  facts_ = snapshot.values;
  return absl::OkStatus();
}

WeightSnapshot Network::SnapshotWeights() const {
  WeightSnapshot snapshot;
  snapshot.weight1.reserve(rules_.size());
  for (const Rule& rule : rules_) snapshot.weight1.push_back(rule.weight1);
  return snapshot;
}

absl::Status Network::RestoreWeights(const WeightSnapshot& snapshot) {
  if (snapshot.weight1.size() != rules_.size()) {
    return absl::FailedPreconditionError(
        absl::StrCat("snapshot holds ", snapshot.weight1.size(),
                     " rules but network has ", rules_.size()));
  }
  for (size_t i = 0; i < rules_.size(); ++i) {
    rules_[i].weight1 = snapshot.weight1[i];
    rules_[i].weight2 = 1.0 - snapshot.weight1[i];
  }
  return absl::OkStatus();
}

absl::Status Network::Validate() const {
  for (size_t i = 0; i < facts_.size(); ++i) {
    if (!IsUnitInterval(facts_[i])) {
      return absl::FailedPreconditionError(
          absl::StrCat("fact ", i, " value ", facts_[i], " outside [0, 1]"));
    }
  }
  for (size_t i = 0; i < rules_.size(); ++i) {
    const Rule& rule = rules_[i];
    if (rule.id.index() != i) {
      return absl::FailedPreconditionError(
          absl::StrCat("rule at position ", i, " has id ", rule.id.value()));
    }
    for (FactId fact : {rule.input1, rule.input2, rule.output}) {
      if (!HasFact(fact)) {
        return absl::FailedPreconditionError(absl::StrCat(
            "rule ", i, " references unknown fact ", fact.value()));
      }
    }
    if (!IsUnitInterval(rule.weight1) || !IsUnitInterval(rule.weight2)) {
      return absl::FailedPreconditionError(
          absl::StrCat("rule ", i, " weight outside [0, 1]"));
    }
    if (std::abs(rule.weight1 + rule.weight2 - 1.0) > kWeightSumTolerance) {
      return absl::FailedPreconditionError(
          absl::StrCat("rule ", i, " weights sum to ",
                       rule.weight1 + rule.weight2));
    }
    if (!IsUnitInterval(rule.lower) || !IsUnitInterval(rule.upper) ||
        rule.lower > rule.upper) {
      return absl::FailedPreconditionError(absl::StrCat(
          "rule ", i, " thresholds [", rule.lower, ", ", rule.upper,
          "] invalid"));
    }
    for (ActionId action : rule.actions) {
      if (!HasAction(action)) {
        return absl::FailedPreconditionError(absl::StrCat(
            "rule ", i, " references unknown action ", action.value()));
      }
      if (actions_[action.index()].rule != rule.id) {
        return absl::FailedPreconditionError(
            absl::StrCat("action ", action.value(), " listed by rule ", i,
                         " belongs to rule ",
                         actions_[action.index()].rule.value()));
      }
    }
  }
  for (size_t i = 0; i < actions_.size(); ++i) {
    const Action& action = actions_[i];
    if (!HasRule(action.rule)) {
      return absl::FailedPreconditionError(absl::StrCat(
          "action ", i, " references unknown rule ", action.rule.value()));
    }
    if (!IsUnitInterval(action.fire_probability)) {
      return absl::FailedPreconditionError(
          absl::StrCat("action ", i, " fire probability outside [0, 1]"));
    }
  }
  return absl::OkStatus();
}

}  // namespace bbtrain
