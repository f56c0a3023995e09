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

#include "bbtrain/engine.h"

#include <algorithm>
#include <chrono>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"

namespace bbtrain {
namespace {

// Tracks which rules already ran or are waiting in this run.
class RuleAgenda {
 public:
  explicit RuleAgenda(size_t rule_count)
      : used_(rule_count, 0), queued_(rule_count, 0) {}

  // Appends the unused, not-yet-queued rules reading `fact` to `out`.
  void CollectReaders(const Network& network, FactId fact,
                      std::vector<RuleId>& out) {
    for (RuleId rule : network.RulesWithInput(fact)) {
      if (used_[rule.index()] || queued_[rule.index()]) continue;
      queued_[rule.index()] = 1;
      out.push_back(rule);
    }
  }

  void MarkUsed(RuleId rule) {
    used_[rule.index()] = 1;
    queued_[rule.index()] = 0;
  }

 private:
  std::vector<char> used_;
  std::vector<char> queued_;
};

// Runs one rule. Returns true when its output was set.
bool ExecuteRule(const Rule& rule, Network& network, Rng& rng,
                 const RunOptions& options, RunResult& result,
                 std::vector<FactId>& changed) {
  ++result.rules_executed;
  const RuleOutcome outcome = EvaluateRule(rule, network.fact_values());
  if (!outcome.applied) return false;
  // Result is clamped into [0, 1] by EvaluateRule.
  (void)network.SetFactValue(rule.output, outcome.result);
  changed.push_back(rule.output);
  result.actions_fired += FireActions(
      rule, network, rng, options,
      options.actions_propagate ? &changed : nullptr);
  return true;
}

void RunWorkList(Network& network, FactId start, Rng& rng,
                 const RunOptions& options, RunResult& result) {
  RuleAgenda agenda(network.rule_count());
  std::vector<RuleId> pending;
  std::vector<FactId> changed;
  agenda.CollectReaders(network, start, pending);
  while (!pending.empty()) {
    const size_t pick = static_cast<size_t>(rng.UniformIndex(pending.size()));
    const RuleId id = pending[pick];
    pending[pick] = pending.back();
    pending.pop_back();
    agenda.MarkUsed(id);
    changed.clear();
    ExecuteRule(network.rule(id), network, rng, options, result, changed);
    for (FactId fact : changed) agenda.CollectReaders(network, fact, pending);
  }
}

void RunLevels(Network& network, FactId start, Rng& rng,
               const RunOptions& options, RunResult& result) {
  RuleAgenda agenda(network.rule_count());
  std::vector<RuleId> level;
  std::vector<RuleId> next;
  std::vector<FactId> level_changed;
  std::vector<FactId> changed;
  agenda.CollectReaders(network, start, level);
  while (!level.empty()) {
    rng.Shuffle(std::span<RuleId>(level));
    level_changed.clear();
    for (RuleId id : level) {
      agenda.MarkUsed(id);
      changed.clear();
      ExecuteRule(network.rule(id), network, rng, options, result, changed);
      level_changed.insert(level_changed.end(), changed.begin(),
                           changed.end());
    }
    next.clear();
    for (FactId fact : level_changed) agenda.CollectReaders(network, fact, next);
    std::swap(level, next);
  }
}

}  // namespace

std::optional<FactId> RandomizeRandomFact(Network& network, Rng& rng) {
  if (network.fact_count() == 0) return std::nullopt;
  const FactId fact(static_cast<uint32_t>(rng.UniformIndex(network.fact_count())));
  (void)network.SetFactValue(fact, rng.Uniform01());
  return fact;
}

RuleOutcome EvaluateRule(const Rule& rule, std::span<const double> facts) {
  const double raw = facts[rule.input1.index()] * rule.weight1 +
                     facts[rule.input2.index()] * rule.weight2;
  // Convex combination of unit-interval values; clamp only absorbs rounding.
  const double result = std::clamp(raw, 0.0, 1.0);
  return RuleOutcome{result, rule.lower <= result && result <= rule.upper};
}

size_t FireActions(const Rule& rule, Network& network, Rng& rng,
                   const RunOptions& options, std::vector<FactId>* changed) {
  size_t fired = 0;
  for (ActionId id : rule.actions) {
    if (!rng.Bernoulli(network.action(id).fire_probability)) continue;
    ++fired;
    const std::optional<FactId> fact =
        options.action_effect ? options.action_effect(network, rng)
                              : RandomizeRandomFact(network, rng);
    if (fact.has_value() && changed != nullptr) changed->push_back(*fact);
  }
  return fired;
}

absl::StatusOr<RunResult> Run(Network& network, FactId start,
                              double start_value, FactId end, Rng& rng,
                              const RunOptions& options) {
  if (!network.HasFact(start)) {
    return absl::NotFoundError(absl::StrCat("unknown start fact ", start.value()));
  }
  if (!network.HasFact(end)) {
    return absl::NotFoundError(absl::StrCat("unknown end fact ", end.value()));
  }
  const auto begin = std::chrono::steady_clock::now();
  if (absl::Status status = network.SetFactValue(start, start_value);
      !status.ok()) {
    return status;
  }
  RunResult result;
  switch (options.mode) {
    case RunMode::kWorkList:
      RunWorkList(network, start, rng, options, result);
      break;
    case RunMode::kLevels:
      RunLevels(network, start, rng, options, result);
      break;
  }
  result.end_value = network.fact_value(end);
  result.elapsed_ns = std::chrono::duration_cast<std::chrono::nanoseconds>(
                          std::chrono::steady_clock::now() - begin)
                          .count();
  return result;
}

}  // namespace bbtrain
