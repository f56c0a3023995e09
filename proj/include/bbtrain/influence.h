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

#ifndef BBTRAIN_INFLUENCE_H_
#define BBTRAIN_INFLUENCE_H_

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "bbtrain/network.h"

namespace bbtrain {

// One step of an influence path: `fact` feeds `rule` through `slot`.
struct PathHop {
  FactId fact;
  RuleId rule;
  InputSlot slot = InputSlot::kFirst;

  friend bool operator==(const PathHop&, const PathHop&) = default;
};

// A forward rule chain from a start fact to an end fact.
//
// contributions[i] is the influence of hops[i].fact on the end fact along
// this chain: its weight in its own hop rule times the weights of every later
// hop. contributions[0] is therefore the start fact's contribution, and the
// fact adjacent to the end carries just its own weight.
struct InfluencePath {
  std::vector<PathHop> hops;
  std::vector<double> contributions;
  double total_contribution = 0.0;  // contributions[0]
  double contribution_sum = 0.0;    // sum of contributions, end excluded

  FactId start() const { return hops.front().fact; }
  std::vector<RuleId> RuleSequence() const;
};

// Product of each hop fact's weight in its hop rule. Fails when the chain is
// empty, a hop rule does not read the hop fact, or a rule's output is not the
// next hop's fact.
absl::StatusOr<double> PathContribution(const Network& network,
                                        std::span<const PathHop> hops);

// Fills contributions and sums for a structurally valid chain.
absl::StatusOr<InfluencePath> MakeInfluencePath(const Network& network,
                                                std::vector<PathHop> hops);

// Most influential path: the simple forward chain from `start` to `end` with
// the largest weight product, found by Dijkstra over the max-product order.
// Ties on the product go to the lexicographically smallest rule sequence.
// Returns nullopt when start == end or no chain exists.
std::optional<InfluencePath> BestPath(const Network& network, FactId start,
                                      FactId end);

// Exhaustive enumeration of simple chains with the same ranking as BestPath.
// Only for small networks; used to check BestPath.
inline constexpr size_t kBruteForceMaxFacts = 12;
absl::StatusOr<std::optional<InfluencePath>> BestPathBruteForce(
    const Network& network, FactId start, FactId end);

}  // namespace bbtrain

#endif  // BBTRAIN_INFLUENCE_H_
