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

#include <cmath>

#include "bbtrain/influence.h"
#include "bbtrain/netfile.h"
#include "gtest/gtest.h"

namespace bbtrain {
namespace {

GenSpec Standard(uint64_t seed) {
  GenSpec spec;
  spec.seed = seed;
  return spec;
}

TEST(ThresholdModeTest, NamesRoundTrip) {
  for (ThresholdMode mode :
       {ThresholdMode::kFull01, ThresholdMode::kBand02To08,
        ThresholdMode::kRandom, ThresholdMode::kRandomMinSep05}) {
    EXPECT_EQ(ParseThresholdMode(ThresholdModeName(mode)).value(), mode);
  }
  EXPECT_FALSE(ParseThresholdMode("wide").ok());
}

TEST(GenSpecTest, Validation) {
  GenSpec spec;
  EXPECT_TRUE(spec.Validate().ok());
  spec.fact_count = 1;
  EXPECT_FALSE(spec.Validate().ok());
  spec = GenSpec();
  spec.rule_count = -1;
  EXPECT_FALSE(spec.Validate().ok());
  spec = GenSpec();
  spec.initial_weight = 1.5;
  EXPECT_FALSE(spec.Validate().ok());
  spec = GenSpec();
  spec.action_fire_probability = -0.5;
  EXPECT_FALSE(spec.Validate().ok());
  spec = GenSpec();
  spec.rule_count = 0;
  spec.action_count = 3;
  EXPECT_FALSE(spec.Validate().ok());
}

TEST(GenerateNetworkTest, SameSeedIdenticalNetwork) {
  GenSpec spec = Standard(42);
  const Network a = GenerateNetwork(spec).value();
  const Network b = GenerateNetwork(spec).value();
  EXPECT_TRUE(a == b);
  EXPECT_EQ(SerializeNetwork(a), SerializeNetwork(b));
  spec.seed = 43;
  EXPECT_FALSE(a == GenerateNetwork(spec).value());
}

TEST(GenerateNetworkTest, CountsAndStandardWeights) {
  GenSpec spec = Standard(1);
  spec.action_count = 40;
  spec.action_fire_probability = 0.3;
  const Network network = GenerateNetwork(spec).value();
  EXPECT_EQ(network.fact_count(), 100u);
  EXPECT_EQ(network.rule_count(), 100u);
  EXPECT_EQ(network.action_count(), 40u);
  for (const Rule& rule : network.rules()) {
    EXPECT_EQ(rule.weight1, 0.5);
    EXPECT_EQ(rule.weight2, 0.5);
    EXPECT_NE(rule.input1, rule.input2);
  }
  for (const Action& action : network.actions()) {
    EXPECT_EQ(action.fire_probability, 0.3);
  }
  EXPECT_TRUE(network.Validate().ok());
}

TEST(GenerateNetworkTest, ThresholdModes) {
  for (uint64_t seed = 0; seed < 5; ++seed) {
    GenSpec spec = Standard(seed);
    spec.threshold_mode = ThresholdMode::kRandomMinSep05;
    for (const Rule& rule : GenerateNetwork(spec)->rules()) {
      EXPECT_GE(rule.upper - rule.lower, 0.5);
    }
    spec.threshold_mode = ThresholdMode::kBand02To08;
    for (const Rule& rule : GenerateNetwork(spec)->rules()) {
      EXPECT_EQ(rule.lower, 0.2);
      EXPECT_EQ(rule.upper, 0.8);
    }
    spec.threshold_mode = ThresholdMode::kFull01;
    for (const Rule& rule : GenerateNetwork(spec)->rules()) {
      EXPECT_EQ(rule.lower, 0.0);
      EXPECT_EQ(rule.upper, 1.0);
    }
    spec.threshold_mode = ThresholdMode::kRandom;
    bool narrow = false;
    for (const Rule& rule : GenerateNetwork(spec)->rules()) {
      EXPECT_LE(rule.lower, rule.upper);
      narrow = narrow || rule.upper - rule.lower < 0.5;
    }
    EXPECT_TRUE(narrow);
  }
}

TEST(GenerateNetworkTest, EmptyShapes) {
  GenSpec spec;
  spec.fact_count = 0;
  spec.rule_count = 0;
  const Network network = GenerateNetwork(spec).value();
  EXPECT_EQ(network.fact_count(), 0u);
  EXPECT_EQ(network.rule_count(), 0u);
}

TEST(MakeScenarioTest, NoRulesIsInvalid) {
  GenSpec spec = Standard(3);
  spec.rule_count = 0;
  Network network = GenerateNetwork(spec).value();
  Rng rng(3);
  EXPECT_FALSE(MakeScenario(network, rng).valid);
}

TEST(MakeScenarioTest, ForcedPair) {
  Network network;
  (void)network.AddFact(0.3).value();
  (void)network.AddFact(0.9).value();
  (void)network.AddRule(FactId(0), 0.5, FactId(1), FactId(1), 0.0, 1.0).value();
  for (uint64_t seed = 0; seed < 20; ++seed) {
    Network copy = network;
    Rng rng(seed);
    const Scenario scenario = MakeScenario(copy, rng);
    ASSERT_TRUE(scenario.valid);
    EXPECT_EQ(scenario.start, FactId(0));
    EXPECT_EQ(scenario.end, FactId(1));
    EXPECT_DOUBLE_EQ(scenario.target,
                     0.5 * scenario.start_value + 0.5 * 0.9);
    // The network keeps the values the initial run left behind.
    EXPECT_EQ(copy.fact_value(FactId(1)), scenario.target);
  }
}

TEST(MakeScenarioTest, ValidMeansConnected) {
  for (uint64_t seed = 0; seed < 30; ++seed) {
    GenSpec spec = Standard(seed);
    spec.fact_count = 60;
    spec.rule_count = 20;
    Network network = GenerateNetwork(spec).value();
    Rng rng(MixSeed(seed, 1));
    const Scenario scenario = MakeScenario(network, rng);
    if (!scenario.valid) continue;
    EXPECT_TRUE(BestPath(network, scenario.start, scenario.end).has_value());
    EXPECT_TRUE(IsUnitInterval(scenario.target));
    EXPECT_EQ(network.fact_value(scenario.end), scenario.target);
  }
}

TEST(MakeScenarioTest, Replay) {
  const Network base = GenerateNetwork(Standard(11)).value();
  Network a = base;
  Network b = base;
  Rng ra(5);
  Rng rb(5);
  const Scenario x = MakeScenario(a, ra);
  const Scenario y = MakeScenario(b, rb);
  EXPECT_EQ(x.valid, y.valid);
  EXPECT_EQ(x.start, y.start);
  EXPECT_EQ(x.end, y.end);
  EXPECT_EQ(x.start_value, y.start_value);
  EXPECT_EQ(x.target, y.target);
  EXPECT_TRUE(x.initial_run.SameOutcome(y.initial_run));
  EXPECT_TRUE(a == b);
}

}  // namespace
}  // namespace bbtrain
