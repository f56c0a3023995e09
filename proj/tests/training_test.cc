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


#include "bbtrain/training.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "gtest/gtest.h"
#include "test_networks.h"

namespace bbtrain {
namespace {

// Facts: 0 (start), 1 (other input), 2 (end). One rule 0,1 -> 2.
Network SingleRule(double w1, double other) {
  Network network;
  (void)network.AddFact(0.0).value();
  (void)network.AddFact(other).value();
  (void)network.AddFact(0.0).value();
  (void)network.AddRule(FactId(0), w1, FactId(1), FactId(2), 0.0, 1.0).value();
  return network;
}

TrainingConfig SingleRuleConfig(double start_value, double target) {
  TrainingConfig config;
  config.start = FactId(0);
  config.start_value = start_value;
  config.end = FactId(2);
  config.target = target;
  return config;
}

TEST(DeltaRTest, Examples) {
  EXPECT_EQ(DeltaR(0.5, 0.5), 0.0);
  EXPECT_DOUBLE_EQ(DeltaR(0.2, 0.8), 0.75);
  EXPECT_DOUBLE_EQ(DeltaR(0.8, 0.2), 0.75);
  EXPECT_EQ(DeltaR(0.0, 0.0), 0.0);
  EXPECT_EQ(DeltaR(0.0, 0.4), 1.0);
}

TEST(MeasureErrorTest, Metrics) {
  EXPECT_DOUBLE_EQ(MeasureError(ErrorMetric::kAbsolute, 0.2, 0.8), 0.6);
  EXPECT_DOUBLE_EQ(MeasureError(ErrorMetric::kRelative, 0.2, 0.8), 0.75);
}

TEST(WeightDeltaTest, Examples) {
  EXPECT_DOUBLE_EQ(WeightDelta(0.3, 0.3, 0.1, 0.5).value(), 0.1 * 0.5);
  EXPECT_EQ(WeightDelta(0.12, 0.72, 0.0, 0.5).value(), 0.0);
  EXPECT_NEAR(WeightDelta(0.12, 0.72, 0.1, 0.5).value(), 0.1 / 12.0, 1e-15);
  EXPECT_EQ(WeightDelta(0.0, 0.0, 0.1, 0.5).status().code(),
            absl::StatusCode::kFailedPrecondition);
}

TEST(ApplyDeltasTest, ComplementAndClamp) {
  Network network = SingleRule(0.5, 0.0);
  const InfluencePath path =
      MakeInfluencePath(network, {{FactId(0), RuleId(0), InputSlot::kFirst}})
          .value();
  const std::vector<double> delta = {0.1};

  ASSERT_TRUE(ApplyDeltas(network, path, delta, +1).ok());
  EXPECT_DOUBLE_EQ(network.rule(RuleId(0)).weight1, 0.6);
  EXPECT_DOUBLE_EQ(network.rule(RuleId(0)).weight2, 0.4);

  network.SetSlotWeight(RuleId(0), InputSlot::kFirst, 0.95);
  ASSERT_TRUE(ApplyDeltas(network, path, delta, +1).ok());
  EXPECT_EQ(network.rule(RuleId(0)).weight1, 1.0);
  EXPECT_EQ(network.rule(RuleId(0)).weight2, 0.0);

  network.SetSlotWeight(RuleId(0), InputSlot::kFirst, 0.05);
  ASSERT_TRUE(ApplyDeltas(network, path, delta, -1).ok());
  EXPECT_EQ(network.rule(RuleId(0)).weight1, 0.0);
  EXPECT_EQ(network.rule(RuleId(0)).weight2, 1.0);

  const std::vector<double> too_many = {0.1, 0.1};
  EXPECT_FALSE(ApplyDeltas(network, path, too_many, +1).ok());
}

TEST(UpdateStepTest, DistributesByContribution) {
  Network network = testing::Fig6Network();
  // Path fact 2 -> fact 3 -> fact 5, C = {0.12, 0.6}, sum 0.72.
  const InfluencePath path = *BestPath(network, FactId(2), FactId(5));
  ASSERT_TRUE(network.SetFactValue(FactId(2), 0.9).ok());
  ASSERT_TRUE(network.SetFactValue(FactId(3), 0.9).ok());
  // current 0.2, target 0.4: raise output, DeltaR = 0.5.
  const std::vector<double> deltas =
      UpdateStep(network, path, 0.2, 0.4, 0.1).value();
  ASSERT_EQ(deltas.size(), 2u);
  EXPECT_NEAR(deltas[0], 0.12 / 0.72 * 0.1 * 0.5, 1e-15);
  EXPECT_NEAR(deltas[1], 0.6 / 0.72 * 0.1 * 0.5, 1e-15);
}

TEST(UpdateStepTest, FlipsWhenPathFactIsBelowOtherInput) {
  Network network = testing::Fig6Network();
  const InfluencePath path = *BestPath(network, FactId(2), FactId(5));
  // Fact 2 below fact 1 (its partner in rule 1); fact 3 above fact 4.
  ASSERT_TRUE(network.SetFactValue(FactId(1), 0.7).ok());
  ASSERT_TRUE(network.SetFactValue(FactId(2), 0.1).ok());
  ASSERT_TRUE(network.SetFactValue(FactId(3), 0.5).ok());
  const std::vector<double> deltas =
      UpdateStep(network, path, 0.2, 0.4, 0.1).value();
  EXPECT_LT(deltas[0], 0.0);
  EXPECT_GT(deltas[1], 0.0);
  const std::vector<double> down =
      UpdateStep(network, path, 0.4, 0.2, 0.1).value();
  EXPECT_GT(down[0], 0.0);
  EXPECT_LT(down[1], 0.0);
}

TEST(UpdateStepTest, NoChangeAtTarget) {
  Network network = testing::Fig6Network();
  const InfluencePath path = *BestPath(network, FactId(2), FactId(5));
  const std::vector<double> deltas =
      UpdateStep(network, path, 0.3, 0.3, 0.5).value();
  for (double d : deltas) EXPECT_EQ(d, 0.0);
}

TEST(TrainTest, RejectsBadConfig) {
  Network network = SingleRule(0.5, 0.0);
  Rng rng(1);
  TrainingConfig config = SingleRuleConfig(0.5, 0.2);
  config.velocity = 0.0;
  EXPECT_FALSE(Train(network, config, rng).ok());
  config.velocity = 1.5;
  EXPECT_FALSE(Train(network, config, rng).ok());
  config = SingleRuleConfig(0.5, 1.2);
  EXPECT_FALSE(Train(network, config, rng).ok());
  config = SingleRuleConfig(0.5, 0.2);
  config.iterations = 0;
  EXPECT_FALSE(Train(network, config, rng).ok());
}

TEST(TrainTest, NoPathIsFailedPrecondition) {
  Network network = testing::Fig6Network();
  Rng rng(1);
  TrainingConfig config;
  config.start = FactId(5);
  config.end = FactId(0);
  EXPECT_EQ(Train(network, config, rng).status().code(),
            absl::StatusCode::kFailedPrecondition);
}

TEST(TrainTest, FixedPointWhenTargetAlreadyMet) {
  Network network = SingleRule(0.5, 0.2);
  // Output = 0.5 * 0.6 + 0.5 * 0.2 = 0.4.
  TrainingConfig config = SingleRuleConfig(0.6, 0.4);
  config.iterations = 20;
  Rng rng(1);
  const TrainingOutcome outcome = Train(network, config, rng).value();
  EXPECT_EQ(network.rule(RuleId(0)).weight1, 0.5);
  for (double e : outcome.per_iteration_errors) EXPECT_NEAR(e, 0.0, 1e-15);
  EXPECT_NEAR(outcome.final_error, 0.0, 1e-15);
}

TEST(TrainTest, MatchesScalarRecurrence) {
  // With the other input at 0 the output is w * s, so the whole procedure
  // reduces to a one-dimensional recurrence on w.
  for (double s : {0.3, 0.9}) {
    for (double t : {0.05, 0.2, 0.6}) {
      for (double v : {0.05, 0.3}) {
        Network network = SingleRule(0.5, 0.0);
        TrainingConfig config = SingleRuleConfig(s, t);
        config.velocity = v;
        config.iterations = 40;
        Rng rng(3);
        const TrainingOutcome outcome = Train(network, config, rng).value();

        double w = 0.5;
        for (int i = 0; i < config.iterations; ++i) {
          const double cur = w * s;
          ASSERT_NEAR(outcome.per_iteration_errors[i], std::abs(cur - t),
                      1e-12)
              << "s=" << s << " t=" << t << " v=" << v << " i=" << i;
          const double dr = std::abs(cur - t) / std::max(cur, t);
          const double sign = t > cur ? 1.0 : (t < cur ? -1.0 : 0.0);
          w = std::clamp(w + sign * v * dr, 0.0, 1.0);
          // A zero weight leaves no contribution to distribute.
          if (w == 0.0 || w == 1.0) break;
        }
        if (w != 0.0 && w != 1.0) {
          EXPECT_NEAR(network.rule(RuleId(0)).weight1, w, 1e-12);
        }
      }
    }
  }
}

TEST(TrainTest, ZeroContributionPathIsLeftAlone) {
  Network network = SingleRule(0.0, 0.0);
  TrainingConfig config = SingleRuleConfig(0.8, 0.5);
  config.iterations = 5;
  Rng rng(1);
  const TrainingOutcome outcome = Train(network, config, rng).value();
  EXPECT_EQ(network.rule(RuleId(0)).weight1, 0.0);
  for (double e : outcome.per_iteration_errors) EXPECT_EQ(e, 0.5);
}

TEST(TrainTest, BestIsMinimumOfRecordedErrors) {
  for (uint64_t seed = 0; seed < 20; ++seed) {
    Rng gen(seed);
    Network network = testing::RandomNetwork(gen, 12, 30);
    TrainingConfig config;
    config.start = FactId(0);
    config.start_value = 0.8;
    config.end = FactId(1);
    config.target = 0.3;
    config.iterations = 50;
    Rng rng(seed);
    absl::StatusOr<TrainingOutcome> outcome = Train(network, config, rng);
    if (!outcome.ok()) continue;
    const auto& errors = outcome->per_iteration_errors;
    ASSERT_EQ(errors.size(), 50u);
    const auto min = std::min_element(errors.begin(), errors.end());
    EXPECT_EQ(outcome->best_error, *min);
    EXPECT_EQ(outcome->best_iteration,
              static_cast<size_t>(min - errors.begin()));
    EXPECT_LE(outcome->best_error, outcome->final_error);
    EXPECT_TRUE(network.Validate().ok());
  }
}

TEST(TrainTest, FactsRestoredAndWeightsKept) {
  Network network = testing::Fig6Network();
  const FactSnapshot before = network.SnapshotFacts();
  TrainingConfig config;
  config.start = FactId(2);
  config.start_value = 1.0;
  config.end = FactId(5);
  config.target = 0.9;
  config.iterations = 5;
  Rng rng(1);
  ASSERT_TRUE(Train(network, config, rng).ok());
  EXPECT_EQ(network.SnapshotFacts().values, before.values);
  EXPECT_NE(network.rule(RuleId(2)).weight1, 0.6);
}

TEST(TrainTest, RetainBestRestoresBestWeights) {
  Rng gen(7);
  int checked = 0;
  for (uint64_t seed = 0; seed < 40; ++seed) {
    Network network = testing::RandomNetwork(gen, 10, 25);
    TrainingConfig config;
    config.start = FactId(0);
    config.start_value = 0.9;
    config.end = FactId(1);
    config.target = 0.1;
    config.iterations = 30;
    config.retain_best = true;
    Network replay = network;
    Rng rng(seed);
    absl::StatusOr<TrainingOutcome> outcome = Train(network, config, rng);
    if (!outcome.ok()) continue;
    ++checked;
    EXPECT_EQ(network.SnapshotWeights().weight1,
              outcome->weights_at_best.weight1);
    // The same run without retention ends on the last weights instead, and
    // records the identical error sequence.
    config.retain_best = false;
    Rng rng2(seed);
    const TrainingOutcome plain = Train(replay, config, rng2).value();
    EXPECT_EQ(plain.per_iteration_errors, outcome->per_iteration_errors);
  }
  EXPECT_GT(checked, 5);
}

TEST(TrainTest, StaticPathMatchesDynamicWhenOnlyOnePathExists) {
  Network a = testing::Fig6Network();
  Network b = a;
  TrainingConfig config;
  config.start = FactId(2);
  config.start_value = 1.0;
  config.end = FactId(5);
  config.target = 0.05;
  config.iterations = 15;
  Rng ra(1);
  const TrainingOutcome dynamic = Train(a, config, ra).value();
  config.static_path = true;
  Rng rb(1);
  const TrainingOutcome fixed = Train(b, config, rb).value();
  EXPECT_EQ(dynamic.per_iteration_errors, fixed.per_iteration_errors);
  EXPECT_TRUE(a == b);
}

TEST(TrainTest, TwoRuleChainConverges) {
  Network network;
  for (int i = 0; i < 5; ++i) (void)network.AddFact(0.0).value();
  (void)network.AddRule(FactId(0), 0.5, FactId(1), FactId(2), 0.0, 1.0).value();
  (void)network.AddRule(FactId(2), 0.5, FactId(3), FactId(4), 0.0, 1.0).value();
  TrainingConfig config;
  config.start = FactId(0);
  config.start_value = 1.0;
  config.end = FactId(4);
  config.target = 0.6;
  config.iterations = 100;
  Rng rng(1);
  const TrainingOutcome outcome = Train(network, config, rng).value();
  EXPECT_NEAR(outcome.per_iteration_errors[0], 0.35, 1e-12);
  EXPECT_LT(outcome.final_error, 0.01);
}

}  // namespace
}  // namespace bbtrain
