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

#ifndef BBTRAIN_EXPERIMENTS_H_
#define BBTRAIN_EXPERIMENTS_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "bbtrain/engine.h"
#include "bbtrain/grid_config.h"
#include "bbtrain/training.h"

namespace bbtrain {

struct ExperimentOptions {
  ErrorMetric error_metric = ErrorMetric::kAbsolute;
  RunOptions run_options;
  bool static_path = false;
  int workers = 1;
  int bucket_size = 25;
};

// One seeded trial. Timings are microseconds. Fields after `train_percent`
// are kept in memory only and are not part of the trial CSV.
struct TrialRecord {
  int condition_id = 0;
  uint64_t trial_seed = 0;
  bool valid = false;
  double target = 0.0;
  double initial_run_us = 0.0;
  double train_us = 0.0;
  double post_run_us = 0.0;
  double final_error = 0.0;  // post-training run vs target
  double best_error = 0.0;   // minimum per-iteration error
  double train_percent = 0.0;

  double last_iteration_error = 0.0;
  size_t best_iteration = 0;
};

struct ConditionSummary {
  Condition condition;
  int trials = 0;
  int valid_count = 0;
  double avg_final_error = 0.0;
  double avg_best_error = 0.0;
  double median_best_error = 0.0;
  double avg_initial_run_us = 0.0;
  double avg_train_us = 0.0;
  // Not in the summary CSV.
  double avg_post_run_us = 0.0;
  double stderr_final_error = 0.0;
  double median_final_error = 0.0;
  double median_last_iteration_error = 0.0;
  double avg_train_percent = 0.0;
  // Count of trials whose best iteration fell in each bucket_size-wide
  // bucket.
  int bucket_size = 25;
  std::vector<int64_t> best_buckets;
};

struct ConditionResult {
  ConditionSummary summary;
  std::vector<TrialRecord> trials;
};

// SplitMix chain over (base seed, condition id, trial index).
uint64_t TrialSeed(uint64_t base_seed, int condition_id, int trial_index);

// Generates a network from the trial seed, selects a scenario, trains it and
// runs it once more. Invalid scenarios come back with valid == false and
// zeroed measurements.
TrialRecord RunTrial(const Condition& condition, int trial_index,
                     const ExperimentOptions& options = {});

// Index of the bucket holding the first minimum of `errors`.
size_t BestBucket(std::span<const double> errors, int bucket_size = 25);

// Histogram over trials of the bucket holding each trial's best iteration.
std::vector<int64_t> BestByBucket(std::span<const std::vector<double>> series,
                                  int bucket_size = 25);

// Aggregates over valid trials only, in trial order.
ConditionSummary Summarize(const Condition& condition,
                           std::span<const TrialRecord> trials,
                           int bucket_size = 25);

// Runs every condition; trials of a condition are spread over `workers`
// threads and collected in trial order.
std::vector<ConditionResult> RunGrid(std::span<const Condition> conditions,
                                     const ExperimentOptions& options = {});

std::string TrialCsvHeader();
std::string TrialCsvRow(const TrialRecord& record);
std::string SummaryCsvHeader();
std::string SummaryCsvRow(const ConditionSummary& summary);

// Writes trials.csv, summary.csv and best_buckets.csv under `dir`.
absl::Status WriteGridCsv(const std::filesystem::path& dir,
                          std::span<const ConditionResult> results);

}  // namespace bbtrain

#endif  // BBTRAIN_EXPERIMENTS_H_
