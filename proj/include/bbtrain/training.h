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

#ifndef BBTRAIN_TRAINING_H_
#define BBTRAIN_TRAINING_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "bbtrain/engine.h"
#include "bbtrain/influence.h"
#include "bbtrain/network.h"
#include "bbtrain/rng.h"

namespace bbtrain {

// How the per-iteration error between run output and target is measured.
enum class ErrorMetric {
  kAbsolute,  // |current - target|
  kRelative,  // DeltaR(current, target)
};

struct TrainingConfig {
  FactId start;
  double start_value = 0.0;
  FactId end;
  double target = 0.0;
  double velocity = 0.1;
  int iterations = 10;
  bool retain_best = false;
  ErrorMetric error_metric = ErrorMetric::kAbsolute;
  // Keep the first iteration's path instead of re-searching every iteration.
  bool static_path = false;
  RunOptions run_options;

  absl::Status Validate() const;
};

struct TrainingOutcome {
  double final_error = 0.0;  // error of the last iteration's run
  double best_error = 0.0;
  size_t best_iteration = 0;  // first iteration reaching best_error
  std::vector<double> per_iteration_errors;
  int64_t elapsed_ns = 0;
  // Weights that produced best_error.
  WeightSnapshot weights_at_best;
};

// |current - target| / max(current, target), and 0 when both are 0.
double DeltaR(double current, double target);

double MeasureError(ErrorMetric metric, double current, double target);

// c_i / c_total * velocity * delta_r. Fails when c_total is not positive.
absl::StatusOr<double> WeightDelta(double c_i, double c_total, double velocity,
                                   double delta_r);

// For each hop: w <- clamp(w + direction * deltas[i], 0, 1) on the hop fact's
// slot, with the rule's other weight set to the complement.
absl::Status ApplyDeltas(Network& network, const InfluencePath& path,
                         std::span<const double> deltas, int direction);

// Signed weight changes for one update step on `path`, given the network's
// current fact values (those left by the iteration's run). Each magnitude is
// WeightDelta(C_i, C_total, velocity, delta_r). The sign moves the end value
// toward `target`: it follows sign(target - current), flipped on hops where
// the path fact's value is below the rule's other input (raising that weight
// lowers the rule's output).
absl::StatusOr<std::vector<double>> UpdateStep(const Network& network,
                                               const InfluencePath& path,
                                               double current, double target,
                                               double velocity);

// Iterative training along the most influential path. Every iteration
// restores the facts captured on entry, runs the network, records the error,
// and applies one UpdateStep. Facts are restored on return; with
// retain_best the best iteration's weights are restored too.
absl::StatusOr<TrainingOutcome> Train(Network& network,
                                      const TrainingConfig& config, Rng& rng);

}  // namespace bbtrain

#endif  // BBTRAIN_TRAINING_H_
