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
#include <chrono>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"

namespace bbtrain {

absl::Status TrainingConfig::Validate() const {
  if (!IsUnitInterval(start_value)) {
    return absl::InvalidArgumentError(
        absl::StrCat("start value ", start_value, " outside [0, 1]"));
  }
  if (!IsUnitInterval(target)) {
    return absl::InvalidArgumentError(
        absl::StrCat("target ", target, " outside [0, 1]"));
  }
  if (!(velocity > 0.0 && velocity <= 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("velocity ", velocity, " outside (0, 1]"));
  }
  if (iterations <= 0) {
    return absl::InvalidArgumentError(
        absl::StrCat("iterations must be positive, got ", iterations));
  }
  return absl::OkStatus();
}

double DeltaR(double current, double target) {
  const double denominator = std::max(current, target);
  if (denominator <= 0.0) return 0.0;
  return std::abs(current - target) / denominator;
}

double MeasureError(ErrorMetric metric, double current, double target) {
  switch (metric) {
    case ErrorMetric::kAbsolute:
      return std::abs(current - target);
    case ErrorMetric::kRelative:
      return DeltaR(current, target);
  }
  return std::abs(current - target);
}

absl::StatusOr<double> WeightDelta(double c_i, double c_total, double velocity,
                                   double delta_r) {
  if (!(c_total > 0.0)) {
    return absl::FailedPreconditionError(
        "path contributions sum to zero; no update can be distributed");
  }
  return c_i / c_total * velocity * delta_r;
}

absl::Status ApplyDeltas(Network& network, const InfluencePath& path,
                         std::span<const double> deltas, int direction) {
  if (deltas.size() != path.hops.size()) {
    return absl::InvalidArgumentError(absl::StrCat(
        deltas.size(), " deltas for ", path.hops.size(), " hops"));
  }
  for (size_t i = 0; i < deltas.size(); ++i) {
    const PathHop& hop = path.hops[i];
    const double weight = network.rule(hop.rule).weight(hop.slot);
    network.SetSlotWeight(hop.rule, hop.slot, weight + direction * deltas[i]);
  }
  return absl::OkStatus();
}

absl::StatusOr<std::vector<double>> UpdateStep(const Network& network,
                                               const InfluencePath& path,
                                               double current, double target,
                                               double velocity) {
  const double delta_r = DeltaR(current, target);
  const int direction = target > current ? 1 : (target < current ? -1 : 0);
  std::vector<double> deltas(path.hops.size(), 0.0);
  for (size_t i = 0; i < path.hops.size(); ++i) {
    absl::StatusOr<double> magnitude = WeightDelta(
        path.contributions[i], path.contribution_sum, velocity, delta_r);
    if (!magnitude.ok()) return magnitude.status();
    const PathHop& hop = path.hops[i];
    const Rule& rule = network.rule(hop.rule);
    const double own = network.fact_value(hop.fact);
    const double other = network.fact_value(rule.other_input(hop.slot));
    const int flip = own < other ? -1 : 1;
    deltas[i] = direction * flip * *magnitude;
  }
  return deltas;
}

absl::StatusOr<TrainingOutcome> Train(Network& network,
                                      const TrainingConfig& config, Rng& rng) {
  if (absl::Status status = config.Validate(); !status.ok()) return status;
  if (!network.HasFact(config.start) || !network.HasFact(config.end)) {
    return absl::NotFoundError("unknown start or end fact");
  }
  const auto begin = std::chrono::steady_clock::now();
  std::optional<InfluencePath> path =
      BestPath(network, config.start, config.end);
  if (!path.has_value()) {
    return absl::FailedPreconditionError(
        absl::StrCat("no path from fact ", config.start.value(), " to fact ",
                     config.end.value()));
  }

  const FactSnapshot reset = network.SnapshotFacts();
  TrainingOutcome outcome;
  outcome.per_iteration_errors.reserve(config.iterations);
  for (int iteration = 0; iteration < config.iterations; ++iteration) {
    (void)network.RestoreFacts(reset);
    absl::StatusOr<RunResult> run =
        Run(network, config.start, config.start_value, config.end, rng,
            config.run_options);
    if (!run.ok()) return run.status();
    const double current = run->end_value;
    const double error = MeasureError(config.error_metric, current, config.target);
    outcome.per_iteration_errors.push_back(error);
    if (iteration == 0 || error < outcome.best_error) {
      outcome.best_error = error;
      outcome.best_iteration = static_cast<size_t>(iteration);
      outcome.weights_at_best = network.SnapshotWeights();
    }

    if (iteration > 0) {
      if (config.static_path) {
        absl::StatusOr<InfluencePath> same =
            MakeInfluencePath(network, std::move(path->hops));
        if (!same.ok()) return same.status();
        path = *std::move(same);
      } else {
        path = BestPath(network, config.start, config.end);
      }
    }
    // Clamping can zero every weight on the path; such a step is skipped.
    if (!path.has_value() || !(path->contribution_sum > 0.0)) continue;
    absl::StatusOr<std::vector<double>> deltas =
        UpdateStep(network, *path, current, config.target, config.velocity);
    if (!deltas.ok()) return deltas.status();
    if (absl::Status status = ApplyDeltas(network, *path, *deltas, 1);
        !status.ok()) {
      return status;
    }
  }

  (void)network.RestoreFacts(reset);
  if (config.retain_best) {
    (void)network.RestoreWeights(outcome.weights_at_best);
  }
  outcome.final_error = outcome.per_iteration_errors.back();
  outcome.elapsed_ns = std::chrono::duration_cast<std::chrono::nanoseconds>(
                           std::chrono::steady_clock::now() - begin)
                           .count();
  return outcome;
}

}  // namespace bbtrain
