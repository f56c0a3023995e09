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

#include "bbtrain/influence.h"

#include <algorithm>
#include <cstddef>
#include <optional>
#include <queue>
#include <span>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"

namespace bbtrain {
namespace {

// Slot through which `fact` feeds `rule`. When both inputs are the same fact
// the first slot is reported; InputWeight still counts both.
InputSlot SlotOf(const Rule& rule, FactId fact) {
  return rule.input1 == fact ? InputSlot::kFirst : InputSlot::kSecond;
}

// Ranking shared by BestPath and the brute-force oracle.
struct Label {
  double product = 0.0;
  std::vector<RuleId> rules;
};

// True when `a` ranks strictly ahead of `b`.
bool Better(double a_product, std::span<const RuleId> a_rules,
            double b_product, std::span<const RuleId> b_rules) {
  if (a_product != b_product) return a_product > b_product;
  return std::lexicographical_compare(a_rules.begin(), a_rules.end(),
                                      b_rules.begin(), b_rules.end());
}

std::vector<PathHop> HopsFromRules(const Network& network, FactId start,
                                   std::span<const RuleId> rules) {
  std::vector<PathHop> hops;
  hops.reserve(rules.size());
  FactId fact = start;
  for (RuleId id : rules) {
    const Rule& rule = network.rule(id);
    hops.push_back(PathHop{fact, id, SlotOf(rule, fact)});
    fact = rule.output;
  }
  return hops;
}

}  // namespace

std::vector<RuleId> InfluencePath::RuleSequence() const {
  std::vector<RuleId> rules;
  rules.reserve(hops.size());
  for (const PathHop& hop : hops) rules.push_back(hop.rule);
  return rules;
}

absl::StatusOr<double> PathContribution(const Network& network,
                                        std::span<const PathHop> hops) {
  if (hops.empty()) return absl::InvalidArgumentError("empty path");
  double product = 1.0;
  for (size_t i = 0; i < hops.size(); ++i) {
    const PathHop& hop = hops[i];
    if (!network.HasRule(hop.rule) || !network.HasFact(hop.fact)) {
      return absl::InvalidArgumentError(
          absl::StrCat("hop ", i, " references an unknown fact or rule"));
    }
    const Rule& rule = network.rule(hop.rule);
    if (!rule.HasInput(hop.fact)) {
      return absl::InvalidArgumentError(
          absl::StrCat("hop ", i, ": rule ", hop.rule.value(),
                       " does not read fact ", hop.fact.value()));
    }
    if (i + 1 < hops.size() && rule.output != hops[i + 1].fact) {
      return absl::InvalidArgumentError(absl::StrCat(
          "hop ", i, ": rule ", hop.rule.value(), " outputs fact ",
          rule.output.value(), ", next hop starts at fact ",
          hops[i + 1].fact.value()));
    }
    product *= rule.InputWeight(hop.fact);
  }
  return product;
}

absl::StatusOr<InfluencePath> MakeInfluencePath(const Network& network,
                                                std::vector<PathHop> hops) {
  absl::StatusOr<double> product = PathContribution(network, hops);
  if (!product.ok()) return product.status();
  InfluencePath path;
  path.hops = std::move(hops);
  path.contributions.assign(path.hops.size(), 0.0);
  double suffix = 1.0;
  for (size_t i = path.hops.size(); i-- > 0;) {
    const PathHop& hop = path.hops[i];
    suffix = network.rule(hop.rule).InputWeight(hop.fact) * suffix;
    path.contributions[i] = suffix;
    path.contribution_sum += suffix;
  }
  // Forward product, so the value matches what the searches rank on.
  path.total_contribution = *product;
  return path;
}

std::optional<InfluencePath> BestPath(const Network& network, FactId start,
                                      FactId end) {
  if (!network.HasFact(start) || !network.HasFact(end) || start == end) {
    return std::nullopt;
  }
  const size_t n = network.fact_count();
  std::vector<Label> best(n);
  std::vector<char> reached(n, 0);
  std::vector<char> settled(n, 0);

  struct Entry {
    double product;
    std::vector<RuleId> rules;
    FactId fact;
  };
  // Heap top is the best-ranked entry.
  auto worse = [](const Entry& a, const Entry& b) {
    return Better(b.product, b.rules, a.product, a.rules);
  };
  std::priority_queue<Entry, std::vector<Entry>, decltype(worse)> queue(worse);

  reached[start.index()] = 1;
  best[start.index()].product = 1.0;
  queue.push(Entry{1.0, {}, start});
  while (!queue.empty()) {
    Entry entry = queue.top();
    queue.pop();
    const size_t u = entry.fact.index();
    if (settled[u]) continue;
    settled[u] = 1;
    if (entry.fact == end) break;
    for (RuleId id : network.RulesWithInput(entry.fact)) {
      const Rule& rule = network.rule(id);
      const size_t v = rule.output.index();
      if (settled[v]) continue;
      const double product = entry.product * rule.InputWeight(entry.fact);
      std::vector<RuleId> rules = entry.rules;
      rules.push_back(id);
      if (reached[v] &&
          !Better(product, rules, best[v].product, best[v].rules)) {
        continue;
      }
      reached[v] = 1;
      best[v] = Label{product, rules};
      queue.push(Entry{product, std::move(rules), rule.output});
    }
  }
  if (!settled[end.index()]) return std::nullopt;
  absl::StatusOr<InfluencePath> path = MakeInfluencePath(
      network, HopsFromRules(network, start, best[end.index()].rules));
  if (!path.ok()) return std::nullopt;
  return *std::move(path);
}

absl::StatusOr<std::optional<InfluencePath>> BestPathBruteForce(
    const Network& network, FactId start, FactId end) {
  if (network.fact_count() > kBruteForceMaxFacts) {
    return absl::OutOfRangeError(
        absl::StrCat("brute force limited to ", kBruteForceMaxFacts,
                     " facts, network has ", network.fact_count()));
  }
  if (!network.HasFact(start) || !network.HasFact(end) || start == end) {
    return std::optional<InfluencePath>();
  }
  std::vector<char> on_path(network.fact_count(), 0);
  std::vector<RuleId> rules;
  std::optional<Label> best;

  auto extend = [&](auto&& self, FactId fact, double product) -> void {
    if (fact == end) {
      if (!best.has_value() ||
          Better(product, rules, best->product, best->rules)) {
        best = Label{product, rules};
      }
      return;
    }
    on_path[fact.index()] = 1;
    for (const Rule& rule : network.rules()) {
      if (!rule.HasInput(fact) || on_path[rule.output.index()]) continue;
      rules.push_back(rule.id);
      self(self, rule.output, product * rule.InputWeight(fact));
      rules.pop_back();
    }
    on_path[fact.index()] = 0;
  };
  extend(extend, start, 1.0);

  if (!best.has_value()) return std::optional<InfluencePath>();
  absl::StatusOr<InfluencePath> path =
      MakeInfluencePath(network, HopsFromRules(network, start, best->rules));
  if (!path.ok()) return path.status();
  return std::optional<InfluencePath>(*std::move(path));
}

}  // namespace bbtrain
