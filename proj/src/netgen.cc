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

#include "bbtrain/netgen.h"

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"
#include "bbtrain/influence.h"

namespace bbtrain {
namespace {

std::pair<double, double> DrawThresholds(ThresholdMode mode, Rng& rng) {
  switch (mode) {
    case ThresholdMode::kFull01:
      return {0.0, 1.0};
    case ThresholdMode::kBand02To08:
      return {0.2, 0.8};
    case ThresholdMode::kRandom: {
      const double a = rng.Uniform01();
      const double b = rng.Uniform01();
      return a <= b ? std::pair{a, b} : std::pair{b, a};
    }
    case ThresholdMode::kRandomMinSep05:
      while (true) {
        const double a = rng.Uniform01();
        const double b = rng.Uniform01();
        const auto [lo, hi] = a <= b ? std::pair{a, b} : std::pair{b, a};
        if (hi - lo >= 0.5) return {lo, hi};
      }
  }
  return {0.0, 1.0};
}

}  // namespace

std::string_view ThresholdModeName(ThresholdMode mode) {
  switch (mode) {
    case ThresholdMode::kFull01:
      return "full01";
    case ThresholdMode::kBand02To08:
      return "band02_08";
    case ThresholdMode::kRandom:
      return "random";
    case ThresholdMode::kRandomMinSep05:
      return "random_minsep05";
  }
  return "unknown";
}

absl::StatusOr<ThresholdMode> ParseThresholdMode(std::string_view name) {
  for (ThresholdMode mode :
       {ThresholdMode::kFull01, ThresholdMode::kBand02To08,
        ThresholdMode::kRandom, ThresholdMode::kRandomMinSep05}) {
    if (name == ThresholdModeName(mode)) return mode;
  }
  return absl::InvalidArgumentError(absl::StrCat(
      "unknown trigger range '", std::string(name),
      "' (expected full01, band02_08, random or random_minsep05)"));
}

absl::Status GenSpec::Validate() const {
  if (fact_count < 0 || rule_count < 0 || action_count < 0) {
    return absl::InvalidArgumentError("counts must be non-negative");
  }
  if (rule_count > 0 && fact_count < 2) {
    return absl::InvalidArgumentError(
        "rules need at least two facts for distinct inputs");
  }
  if (action_count > 0 && rule_count == 0) {
    return absl::InvalidArgumentError("actions need at least one rule");
  }
  if (!IsUnitInterval(initial_weight)) {
    return absl::InvalidArgumentError(
        absl::StrCat("rule weight ", initial_weight, " outside [0, 1]"));
  }
  if (!IsUnitInterval(action_fire_probability)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "fire probability ", action_fire_probability, " outside [0, 1]"));
  }
  return absl::OkStatus();
}

absl::StatusOr<Network> GenerateNetwork(const GenSpec& spec) {
  if (absl::Status status = spec.Validate(); !status.ok()) return status;
  Rng rng(spec.seed);
  Network network(spec.seed);
  for (int i = 0; i < spec.fact_count; ++i) {
    if (auto id = network.AddFact(rng.Uniform01()); !id.ok()) return id.status();
  }
  const auto facts = static_cast<uint64_t>(spec.fact_count);
  for (int i = 0; i < spec.rule_count; ++i) {
    const FactId input1(static_cast<uint32_t>(rng.UniformIndex(facts)));
    uint64_t second = rng.UniformIndex(facts - 1);
    if (second >= input1.value()) ++second;
    const FactId input2(static_cast<uint32_t>(second));
    const FactId output(static_cast<uint32_t>(rng.UniformIndex(facts)));
    const auto [lower, upper] = DrawThresholds(spec.threshold_mode, rng);
    absl::StatusOr<RuleId> rule = network.AddRule(
        input1, spec.initial_weight, input2, output, lower, upper);
    if (!rule.ok()) return rule.status();
  }
  for (int i = 0; i < spec.action_count; ++i) {
    const RuleId rule(static_cast<uint32_t>(
        rng.UniformIndex(static_cast<uint64_t>(spec.rule_count))));
    absl::StatusOr<ActionId> action =
        network.AddAction(rule, spec.action_fire_probability);
    if (!action.ok()) return action.status();
  }
  return network;
}

Scenario MakeScenario(Network& network, Rng& rng, const RunOptions& options) {
  Scenario scenario;
  if (network.fact_count() < 2 || network.rule_count() == 0) return scenario;
  const uint64_t facts = network.fact_count();
  for (int attempt = 0; attempt < kPairSelectionAttempts; ++attempt) {
    const FactId start(static_cast<uint32_t>(rng.UniformIndex(facts)));
    const FactId end(static_cast<uint32_t>(rng.UniformIndex(facts)));
    if (BestPath(network, start, end).has_value()) {
      scenario.start = start;
      scenario.end = end;
      scenario.valid = true;
      break;
    }
  }
  if (!scenario.valid) return scenario;
  scenario.start_value = rng.Uniform01();
  absl::StatusOr<RunResult> run =
      Run(network, scenario.start, scenario.start_value, scenario.end, rng,
          options);
  if (!run.ok()) {
    scenario.valid = false;
    return scenario;
  }
  scenario.initial_run = *run;
  scenario.target = run->end_value;
  return scenario;
}

}  // namespace bbtrain
