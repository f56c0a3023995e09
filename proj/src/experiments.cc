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

#include "bbtrain/experiments.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "bbtrain/netfile.h"
#include "bbtrain/netgen.h"
#include "bbtrain/rng.h"

namespace bbtrain {
namespace {

// Stream tag separating run-time randomness from generation randomness.
constexpr uint64_t kRunStreamTag = 0x72756e73ULL;

double Micros(int64_t ns) { return static_cast<double>(ns) / 1000.0; }

double Median(std::vector<double> values) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const size_t mid = values.size() / 2;
  if (values.size() % 2 == 1) return values[mid];
  return (values[mid - 1] + values[mid]) / 2.0;
}

double Mean(std::span<const double> values) {
  if (values.empty()) return 0.0;
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

absl::Status WriteFile(const std::filesystem::path& path,
                       const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    return absl::UnavailableError(absl::StrCat("cannot open ", path.string()));
  }
  out << contents;
  out.close();
  if (!out) {
    return absl::UnavailableError(absl::StrCat("write failed: ", path.string()));
  }
  return absl::OkStatus();
}

}  // namespace

uint64_t TrialSeed(uint64_t base_seed, int condition_id, int trial_index) {
  return MixSeed(base_seed, static_cast<uint64_t>(condition_id),
                 static_cast<uint64_t>(trial_index));
}

TrialRecord RunTrial(const Condition& condition, int trial_index,
                     const ExperimentOptions& options) {
  TrialRecord record;
  record.condition_id = condition.id;
  record.trial_seed = TrialSeed(condition.base_seed, condition.id, trial_index);

  GenSpec spec = condition.gen;
  spec.seed = record.trial_seed;
  absl::StatusOr<Network> generated = GenerateNetwork(spec);
  if (!generated.ok()) return record;
  Network network = *std::move(generated);

  Rng rng(MixSeed(record.trial_seed, kRunStreamTag));
  const Scenario scenario = MakeScenario(network, rng, options.run_options);
  if (!scenario.valid) return record;

  TrainingConfig config;
  config.start = scenario.start;
  config.start_value = scenario.start_value;
  config.end = scenario.end;
  config.target = scenario.target;
  config.velocity = condition.velocity;
  config.iterations = condition.iterations;
  config.retain_best = condition.retain_best;
  config.error_metric = options.error_metric;
  config.static_path = options.static_path;
  config.run_options = options.run_options;
  absl::StatusOr<TrainingOutcome> outcome = Train(network, config, rng);
  if (!outcome.ok()) return record;

  absl::StatusOr<RunResult> post = Run(network, scenario.start,
                                       scenario.start_value, scenario.end,
                                       rng, options.run_options);
  if (!post.ok()) return record;

  record.valid = true;
  record.target = scenario.target;
  record.initial_run_us = Micros(scenario.initial_run.elapsed_ns);
  record.train_us = Micros(outcome->elapsed_ns);
  record.post_run_us = Micros(post->elapsed_ns);
  record.final_error =
      MeasureError(options.error_metric, post->end_value, scenario.target);
  record.best_error = outcome->best_error;
  const double per_iteration_ns =
      static_cast<double>(outcome->elapsed_ns) / condition.iterations;
  record.train_percent =
      scenario.initial_run.elapsed_ns > 0
          ? per_iteration_ns / static_cast<double>(scenario.initial_run.elapsed_ns)
          : 0.0;
  record.last_iteration_error = outcome->final_error;
  record.best_iteration = outcome->best_iteration;
  return record;
}

size_t BestBucket(std::span<const double> errors, int bucket_size) {
  if (errors.empty() || bucket_size <= 0) return 0;
  const auto best = std::min_element(errors.begin(), errors.end());
  return static_cast<size_t>(best - errors.begin()) /
         static_cast<size_t>(bucket_size);
}

std::vector<int64_t> BestByBucket(std::span<const std::vector<double>> series,
                                  int bucket_size) {
  std::vector<int64_t> histogram;
  if (bucket_size <= 0) return histogram;
  for (const std::vector<double>& errors : series) {
    const size_t buckets =
        (errors.size() + static_cast<size_t>(bucket_size) - 1) /
        static_cast<size_t>(bucket_size);
    if (histogram.size() < buckets) histogram.resize(buckets, 0);
    if (errors.empty()) continue;
    ++histogram[BestBucket(errors, bucket_size)];
  }
  return histogram;
}

ConditionSummary Summarize(const Condition& condition,
                           std::span<const TrialRecord> trials,
                           int bucket_size) {
  ConditionSummary summary;
  summary.condition = condition;
  summary.trials = static_cast<int>(trials.size());
  std::vector<double> final_errors, best_errors, last_errors, initial_us,
      train_us, post_us, train_percent;
  const size_t buckets =
      bucket_size > 0 ? (static_cast<size_t>(condition.iterations) +
                         static_cast<size_t>(bucket_size) - 1) /
                            static_cast<size_t>(bucket_size)
                      : 0;
  summary.bucket_size = bucket_size;
  summary.best_buckets.assign(buckets, 0);
  for (const TrialRecord& trial : trials) {
    if (!trial.valid) continue;
    ++summary.valid_count;
    final_errors.push_back(trial.final_error);
    best_errors.push_back(trial.best_error);
    last_errors.push_back(trial.last_iteration_error);
    initial_us.push_back(trial.initial_run_us);
    train_us.push_back(trial.train_us);
    post_us.push_back(trial.post_run_us);
    train_percent.push_back(trial.train_percent);
    if (buckets > 0) {
      const size_t bucket = trial.best_iteration / static_cast<size_t>(bucket_size);
      if (bucket < buckets) ++summary.best_buckets[bucket];
    }
  }
  summary.avg_final_error = Mean(final_errors);
  summary.avg_best_error = Mean(best_errors);
  summary.median_best_error = Median(best_errors);
  summary.avg_initial_run_us = Mean(initial_us);
  summary.avg_train_us = Mean(train_us);
  summary.avg_post_run_us = Mean(post_us);
  summary.median_final_error = Median(final_errors);
  summary.median_last_iteration_error = Median(last_errors);
  summary.avg_train_percent = Mean(train_percent);
  if (final_errors.size() > 1) {
    double squares = 0.0;
    for (double e : final_errors) {
      squares += (e - summary.avg_final_error) * (e - summary.avg_final_error);
    }
    const double n = static_cast<double>(final_errors.size());
    summary.stderr_final_error = std::sqrt(squares / (n - 1.0)) / std::sqrt(n);
  }
  return summary;
}

std::vector<ConditionResult> RunGrid(std::span<const Condition> conditions,
                                     const ExperimentOptions& options) {
  std::vector<ConditionResult> results;
  results.reserve(conditions.size());
  const int workers = std::max(1, options.workers);
  for (const Condition& condition : conditions) {
    std::vector<TrialRecord> trials(static_cast<size_t>(condition.trials));
    std::atomic<int> next{0};
    auto work = [&]() {
      for (int i = next.fetch_add(1); i < condition.trials;
           i = next.fetch_add(1)) {
        trials[static_cast<size_t>(i)] = RunTrial(condition, i, options);
      }
    };
    if (workers == 1) {
      work();
    } else {
      std::vector<std::jthread> pool;
      for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    }
    ConditionResult result;
    result.summary = Summarize(condition, trials, options.bucket_size);
    result.trials = std::move(trials);
    results.push_back(std::move(result));
  }
  return results;
}

std::string TrialCsvHeader() {
  return "condition_id,trial_seed,valid,target,initial_run_us,train_us,"
         "post_run_us,final_error,best_error,train_percent";
}

std::string TrialCsvRow(const TrialRecord& r) {
  if (!r.valid) {
    return absl::StrCat(r.condition_id, ",", r.trial_seed, ",0,,,,,,,");
  }
  return absl::StrCat(r.condition_id, ",", r.trial_seed, ",1,",
                      FormatScalar(r.target), ",",
                      FormatScalar(r.initial_run_us), ",",
                      FormatScalar(r.train_us), ",",
                      FormatScalar(r.post_run_us), ",",
                      FormatScalar(r.final_error), ",",
                      FormatScalar(r.best_error), ",",
                      FormatScalar(r.train_percent));
}

std::string SummaryCsvHeader() {
  return "condition_id,name,fact_count,rule_count,action_count,rule_weights,"
         "trigger_range,action_fire_probability,iteration_count,velocity,"
         "retain_best,trials,valid_count,avg_final_error,avg_best_error,"
         "median_best_error,avg_initial_run_us,avg_train_us";
}

std::string SummaryCsvRow(const ConditionSummary& s) {
  const Condition& c = s.condition;
  return absl::StrCat(
      c.id, ",", c.name, ",", c.gen.fact_count, ",", c.gen.rule_count, ",",
      c.gen.action_count, ",", FormatScalar(c.gen.initial_weight), ",",
      std::string(ThresholdModeName(c.gen.threshold_mode)), ",",
      FormatScalar(c.gen.action_fire_probability), ",", c.iterations, ",",
      FormatScalar(c.velocity), ",", c.retain_best ? 1 : 0, ",", s.trials, ",",
      s.valid_count, ",", FormatScalar(s.avg_final_error), ",",
      FormatScalar(s.avg_best_error), ",", FormatScalar(s.median_best_error),
      ",", FormatScalar(s.avg_initial_run_us), ",",
      FormatScalar(s.avg_train_us));
}

absl::Status WriteGridCsv(const std::filesystem::path& dir,
                          std::span<const ConditionResult> results) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    return absl::UnavailableError(
        absl::StrCat("cannot create ", dir.string(), ": ", ec.message()));
  }
  std::string trials = TrialCsvHeader() + "\n";
  std::string summary = SummaryCsvHeader() + "\n";
  std::string buckets = "condition_id,bucket_start,bucket_end,best_count\n";
  for (const ConditionResult& result : results) {
    for (const TrialRecord& record : result.trials) {
      absl::StrAppend(&trials, TrialCsvRow(record), "\n");
    }
    absl::StrAppend(&summary, SummaryCsvRow(result.summary), "\n");
    const auto& histogram = result.summary.best_buckets;
    for (size_t b = 0; b < histogram.size(); ++b) {
      // Bounds are 1-based iteration numbers.
      const auto width = static_cast<size_t>(result.summary.bucket_size);
      absl::StrAppend(&buckets, result.summary.condition.id, ",",
                      b * width + 1, ",",
                      std::min((b + 1) * width,
                               static_cast<size_t>(
                                   result.summary.condition.iterations)),
                      ",", histogram[b], "\n");
    }
  }
  if (absl::Status s = WriteFile(dir / "trials.csv", trials); !s.ok()) return s;
  if (absl::Status s = WriteFile(dir / "summary.csv", summary); !s.ok()) return s;
  return WriteFile(dir / "best_buckets.csv", buckets);
}

}  // namespace bbtrain
