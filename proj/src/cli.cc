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

#include "bbtrain/cli.h"

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"
#include "bbtrain/engine.h"
#include "bbtrain/experiments.h"
#include "bbtrain/grid_config.h"
#include "bbtrain/influence.h"
#include "bbtrain/netfile.h"
#include "bbtrain/netgen.h"
#include "bbtrain/network.h"
#include "bbtrain/rng.h"
#include "bbtrain/training.h"

namespace bbtrain {
namespace {

// Failure carrying the exit code it maps to.
struct CommandError {
  int code;
  std::string message;
};

CommandError DataError(std::string message) {
  return CommandError{kExitData, std::move(message)};
}
CommandError IoError(std::string message) {
  return CommandError{kExitIo, std::move(message)};
}

std::string ReadFileOrThrow(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(absl::StrCat("cannot read ", path));
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void WriteFileOrThrow(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(absl::StrCat("cannot write ", path));
  out << contents;
  out.close();
  if (!out) throw IoError(absl::StrCat("write failed: ", path));
}

NetDocument LoadNetworkOrThrow(const std::string& path) {
  absl::StatusOr<NetDocument> doc = ParseNetFile(ReadFileOrThrow(path));
  if (!doc.ok()) {
    throw DataError(absl::StrCat(path, ": ", doc.status().message()));
  }
  return *std::move(doc);
}

// Options shared by the subcommands that run the network.
struct RunFlags {
  std::string net;
  std::optional<uint32_t> start;
  std::optional<double> start_value;
  std::optional<uint32_t> end;
  std::optional<uint64_t> seed;
  std::string mode = "worklist";
  bool actions_propagate = false;
  bool porcelain = false;
  bool no_timing = false;

  void Register(CLI::App* cmd) {
    cmd->add_option("--net", net, "Network file (.bbn)")->required();
    cmd->add_option("--start", start,
                    "Start fact id (default: the file's scenario)");
    cmd->add_option("--start-value", start_value,
                    "Value assigned to the start fact (default: scenario)");
    cmd->add_option("--end", end, "End fact id (default: the file's scenario)");
    cmd->add_option("--seed", seed, "RNG seed; chosen and reported if absent");
    cmd->add_option("--mode", mode, "Rule scheduling: worklist or levels")
        ->check(CLI::IsMember({"worklist", "levels"}));
    cmd->add_flag("--actions-propagate", actions_propagate,
                  "Facts changed by actions enqueue their readers");
    cmd->add_flag("--porcelain", porcelain, "Machine-readable key=value output");
    cmd->add_flag("--no-timing", no_timing, "Omit timing lines");
  }

  RunOptions Options() const {
    RunOptions options;
    options.mode = mode == "levels" ? RunMode::kLevels : RunMode::kWorkList;
    options.actions_propagate = actions_propagate;
    return options;
  }
};

uint64_t ResolveSeed(const std::optional<uint64_t>& seed, std::ostream& err) {
  if (seed.has_value()) return *seed;
  std::random_device device;
  const uint64_t chosen =
      (static_cast<uint64_t>(device()) << 32) ^ static_cast<uint64_t>(device());
  err << "seed=" << chosen << "\n";
  return chosen;
}

struct Endpoints {
  FactId start;
  double start_value;
  FactId end;
};

Endpoints ResolveEndpoints(const RunFlags& flags, const NetDocument& doc) {
  const std::optional<Scenario>& scenario = doc.scenario;
  if ((!flags.start || !flags.end || !flags.start_value) &&
      !scenario.has_value()) {
    throw CommandError{kExitUsage,
                       "--start, --start-value and --end are required when "
                       "the network file has no scenario"};
  }
  Endpoints e;
  e.start = FactId(flags.start ? *flags.start : scenario->start.value());
  e.end = FactId(flags.end ? *flags.end : scenario->end.value());
  e.start_value = flags.start_value ? *flags.start_value : scenario->start_value;
  if (!doc.network.HasFact(e.start)) {
    throw DataError(absl::StrCat("unknown start fact ", e.start.value()));
  }
  if (!doc.network.HasFact(e.end)) {
    throw DataError(absl::StrCat("unknown end fact ", e.end.value()));
  }
  if (!IsUnitInterval(e.start_value)) {
    throw DataError(
        absl::StrCat("start value ", e.start_value, " outside [0, 1]"));
  }
  return e;
}

// Key/value printer: `key=value` under --porcelain, aligned otherwise.
class Report {
 public:
  Report(std::ostream& out, bool porcelain) : out_(out), porcelain_(porcelain) {}

  template <typename T>
  void Field(std::string_view key, const T& value) {
    if (porcelain_) {
      out_ << key << "=" << value << "\n";
    } else {
      out_ << key << ":" << std::string(key.size() < 22 ? 22 - key.size() : 1, ' ')
           << value << "\n";
    }
  }

 private:
  std::ostream& out_;
  bool porcelain_;
};

void CmdGenerate(const GenSpec& spec_in, const std::optional<uint64_t>& seed,
                 const std::string& out_path, std::ostream& out,
                 std::ostream& err) {
  GenSpec spec = spec_in;
  spec.seed = ResolveSeed(seed, err);
  absl::StatusOr<Network> network = GenerateNetwork(spec);
  if (!network.ok()) throw DataError(std::string(network.status().message()));
  Rng rng(MixSeed(spec.seed, 1));
  const Scenario scenario = MakeScenario(*network, rng);
  WriteFileOrThrow(out_path, SerializeNetwork(*network, &scenario));
  std::string sidecar = absl::StrCat(
      "valid=", scenario.valid ? 1 : 0, "\nstart=", scenario.start.value(),
      "\nstart_value=", FormatScalar(scenario.start_value),
      "\nend=", scenario.end.value(), "\ntarget=", FormatScalar(scenario.target),
      "\nseed=", spec.seed, "\nrng=", std::string(Rng::kAlgorithmId), "\n");
  WriteFileOrThrow(out_path + ".scenario", sidecar);
  out << "wrote " << out_path << " (" << network->fact_count() << " facts, "
      << network->rule_count() << " rules, " << network->action_count()
      << " actions; scenario " << (scenario.valid ? "valid" : "invalid")
      << ")\n";
}

void CmdRun(const RunFlags& flags, std::ostream& out, std::ostream& err) {
  NetDocument doc = LoadNetworkOrThrow(flags.net);
  const Endpoints e = ResolveEndpoints(flags, doc);
  Rng rng(ResolveSeed(flags.seed, err));
  absl::StatusOr<RunResult> result = Run(doc.network, e.start, e.start_value,
                                         e.end, rng, flags.Options());
  if (!result.ok()) throw DataError(std::string(result.status().message()));
  Report report(out, flags.porcelain);
  report.Field("end_value", FormatScalar(result->end_value));
  report.Field("rules_executed", result->rules_executed);
  report.Field("actions_fired", result->actions_fired);
  if (!flags.no_timing) report.Field("elapsed_ns", result->elapsed_ns);
}

struct TrainFlags {
  RunFlags run;
  std::optional<double> target;
  double velocity = 0.1;
  int iterations = 10;
  bool retain_best = false;
  bool print_errors = false;
  std::string error_metric = "absolute";
  bool static_path = false;
  std::string save;
};

void CmdTrain(const TrainFlags& flags, std::ostream& out, std::ostream& err) {
  NetDocument doc = LoadNetworkOrThrow(flags.run.net);
  const Endpoints e = ResolveEndpoints(flags.run, doc);
  TrainingConfig config;
  config.start = e.start;
  config.start_value = e.start_value;
  config.end = e.end;
  if (flags.target) {
    config.target = *flags.target;
  } else if (doc.scenario.has_value()) {
    config.target = doc.scenario->target;
  } else {
    throw CommandError{kExitUsage, "--target is required when the network "
                                   "file has no scenario"};
  }
  config.velocity = flags.velocity;
  config.iterations = flags.iterations;
  config.retain_best = flags.retain_best;
  config.error_metric = flags.error_metric == "relative"
                            ? ErrorMetric::kRelative
                            : ErrorMetric::kAbsolute;
  config.static_path = flags.static_path;
  config.run_options = flags.run.Options();
  if (absl::Status status = config.Validate(); !status.ok()) {
    throw DataError(std::string(status.message()));
  }
  if (!BestPath(doc.network, config.start, config.end).has_value()) {
    throw DataError(absl::StrCat("no path from fact ", config.start.value(),
                                 " to fact ", config.end.value(),
                                 "; invalid training pair"));
  }
  Rng rng(ResolveSeed(flags.run.seed, err));
  absl::StatusOr<TrainingOutcome> outcome = Train(doc.network, config, rng);
  if (!outcome.ok()) throw DataError(std::string(outcome.status().message()));

  Report report(out, flags.run.porcelain);
  report.Field("iterations", outcome->per_iteration_errors.size());
  report.Field("final_error", FormatScalar(outcome->final_error));
  report.Field("best_error", FormatScalar(outcome->best_error));
  report.Field("best_iteration", outcome->best_iteration);
  if (!flags.run.no_timing) report.Field("elapsed_ns", outcome->elapsed_ns);
  if (flags.print_errors) {
    for (size_t i = 0; i < outcome->per_iteration_errors.size(); ++i) {
      report.Field(absl::StrCat("error[", i, "]"),
                   FormatScalar(outcome->per_iteration_errors[i]));
    }
  }
  if (!flags.save.empty()) {
    const Scenario* scenario =
        doc.scenario.has_value() ? &*doc.scenario : nullptr;
    WriteFileOrThrow(flags.save, SerializeNetwork(doc.network, scenario));
  }
}

void CmdInspect(const std::string& net, uint32_t start, uint32_t end,
                bool porcelain, std::ostream& out) {
  NetDocument doc = LoadNetworkOrThrow(net);
  const Network& network = doc.network;
  if (!network.HasFact(FactId(start)) || !network.HasFact(FactId(end))) {
    throw DataError("unknown start or end fact");
  }
  std::optional<InfluencePath> path =
      BestPath(network, FactId(start), FactId(end));
  if (!path.has_value()) {
    throw DataError(
        absl::StrCat("no path from fact ", start, " to fact ", end));
  }
  if (porcelain) {
    out << "hops=" << path->hops.size() << "\n";
    for (size_t i = 0; i < path->hops.size(); ++i) {
      const PathHop& hop = path->hops[i];
      const Rule& rule = network.rule(hop.rule);
      out << "hop[" << i << "]=fact:" << hop.fact << " rule:" << hop.rule
          << " output:" << rule.output
          << " weight:" << FormatScalar(rule.InputWeight(hop.fact))
          << " contribution:" << FormatScalar(path->contributions[i]) << "\n";
    }
    out << "contribution=" << FormatScalar(path->total_contribution) << "\n";
    out << "contribution_sum=" << FormatScalar(path->contribution_sum) << "\n";
    return;
  }
  out << "most influential path from fact " << start << " to fact " << end
      << "\n";
  for (size_t i = 0; i < path->hops.size(); ++i) {
    const PathHop& hop = path->hops[i];
    const Rule& rule = network.rule(hop.rule);
    out << "  fact " << hop.fact << " --[rule " << hop.rule << ", weight "
        << FormatScalar(rule.InputWeight(hop.fact)) << "]--> fact "
        << rule.output << "   contribution "
        << FormatScalar(path->contributions[i]) << "\n";
  }
  out << "contribution of fact " << start << ": "
      << FormatScalar(path->total_contribution) << "\n";
  out << "sum of path contributions: " << FormatScalar(path->contribution_sum)
      << "\n";
}

struct ExperimentFlags {
  std::string grid = "builtin";
  std::string out_dir;
  std::optional<int> trials;
  uint64_t base_seed = 0;
  int workers = 1;
  std::string error_metric = "absolute";
  bool static_path = false;
  int bucket_size = 25;
};

void CmdExperiment(const ExperimentFlags& flags, std::ostream& out) {
  std::vector<Condition> conditions;
  if (flags.grid == "builtin") {
    conditions = BuiltinGrid();
  } else {
    absl::StatusOr<std::vector<Condition>> parsed =
        ParseGridConfig(ReadFileOrThrow(flags.grid));
    if (!parsed.ok()) {
      throw DataError(absl::StrCat(flags.grid, ": ", parsed.status().message()));
    }
    conditions = *std::move(parsed);
  }
  for (Condition& c : conditions) {
    c.base_seed = flags.base_seed;
    if (flags.trials) c.trials = *flags.trials;
  }
  ExperimentOptions options;
  options.workers = flags.workers;
  options.error_metric = flags.error_metric == "relative"
                             ? ErrorMetric::kRelative
                             : ErrorMetric::kAbsolute;
  options.static_path = flags.static_path;
  options.bucket_size = flags.bucket_size;
  const std::vector<ConditionResult> results = RunGrid(conditions, options);
  if (absl::Status status = WriteGridCsv(flags.out_dir, results);
      !status.ok()) {
    throw IoError(std::string(status.message()));
  }
  for (const ConditionResult& r : results) {
    out << r.summary.condition.id << " " << r.summary.condition.name
        << " valid=" << r.summary.valid_count << "/" << r.summary.trials
        << " avg_final_error=" << FormatScalar(r.summary.avg_final_error)
        << " avg_best_error=" << FormatScalar(r.summary.avg_best_error) << "\n";
  }
  out << "wrote " << (std::filesystem::path(flags.out_dir) / "summary.csv").string()
      << "\n";
}

}  // namespace

int Dispatch(const std::vector<std::string>& args, std::ostream& out,
             std::ostream& err) {
  CLI::App app{"Train and evaluate rule-fact-action networks", "bbtrain"};
  app.require_subcommand(1);

  GenSpec gen;
  gen.action_fire_probability = 1.0;
  std::string trigger = "random_minsep05";
  std::optional<uint64_t> gen_seed;
  std::string gen_out;
  CLI::App* generate = app.add_subcommand("generate", "Generate a random network and scenario");
  generate->add_option("--facts", gen.fact_count, "Fact count")->capture_default_str();
  generate->add_option("--rules", gen.rule_count, "Rule count")->capture_default_str();
  generate->add_option("--actions", gen.action_count, "Action count")->capture_default_str();
  generate->add_option("--weight", gen.initial_weight, "Initial first-input weight")->capture_default_str();
  generate->add_option("--trigger", trigger, "full01, band02_08, random or random_minsep05")
      ->capture_default_str();
  generate->add_option("--fire-prob", gen.action_fire_probability, "Action fire probability")
      ->capture_default_str();
  generate->add_option("--seed", gen_seed, "RNG seed; chosen and reported if absent");
  generate->add_option("--out", gen_out, "Output .bbn path")->required();

  RunFlags run_flags;
  CLI::App* run = app.add_subcommand("run", "Run a network once");
  run_flags.Register(run);

  TrainFlags train_flags;
  CLI::App* train = app.add_subcommand("train", "Train weights along the most influential path");
  train_flags.run.Register(train);
  train->add_option("--target", train_flags.target, "Target end value (default: scenario)");
  train->add_option("--velocity", train_flags.velocity, "Velocity in (0, 1]")->capture_default_str();
  train->add_option("--iterations", train_flags.iterations, "Training iterations")->capture_default_str();
  train->add_flag("--retain-best", train_flags.retain_best, "Keep the best iteration's weights");
  train->add_flag("--errors", train_flags.print_errors, "Print the per-iteration error series");
  train->add_option("--error-metric", train_flags.error_metric, "absolute or relative")
      ->check(CLI::IsMember({"absolute", "relative"}))
      ->capture_default_str();
  train->add_flag("--static-path", train_flags.static_path, "Freeze the first iteration's path");
  train->add_option("--save", train_flags.save, "Write the trained network here");

  std::string inspect_net;
  uint32_t inspect_start = 0;
  uint32_t inspect_end = 0;
  bool inspect_porcelain = false;
  CLI::App* inspect = app.add_subcommand("inspect", "Show the most influential path and its contributions");
  inspect->add_option("--net", inspect_net, "Network file (.bbn)")->required();
  inspect->add_option("--start", inspect_start, "Start fact id")->required();
  inspect->add_option("--end", inspect_end, "End fact id")->required();
  inspect->add_flag("--porcelain", inspect_porcelain, "Machine-readable output");

  ExperimentFlags exp_flags;
  CLI::App* experiment = app.add_subcommand("experiment", "Run an experiment grid and write CSVs");
  experiment->add_option("--grid", exp_flags.grid, "'builtin' or a grid file")->capture_default_str();
  experiment->add_option("--out", exp_flags.out_dir, "Output directory")->required();
  experiment->add_option("--trials", exp_flags.trials, "Override trials per condition");
  experiment->add_option("--base-seed", exp_flags.base_seed, "Base seed")->capture_default_str();
  experiment->add_option("--workers", exp_flags.workers, "Worker threads")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  experiment->add_option("--error-metric", exp_flags.error_metric, "absolute or relative")
      ->check(CLI::IsMember({"absolute", "relative"}))
      ->capture_default_str();
  experiment->add_flag("--static-path", exp_flags.static_path, "Freeze each trial's first path");
  experiment->add_option("--bucket-size", exp_flags.bucket_size, "Best-iteration histogram bucket width")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    if (generate->parsed()) {
      absl::StatusOr<ThresholdMode> mode = ParseThresholdMode(trigger);
      if (!mode.ok()) throw CommandError{kExitUsage, std::string(mode.status().message())};
      gen.threshold_mode = *mode;
      CmdGenerate(gen, gen_seed, gen_out, out, err);
    } else if (run->parsed()) {
      CmdRun(run_flags, out, err);
    } else if (train->parsed()) {
      CmdTrain(train_flags, out, err);
    } else if (inspect->parsed()) {
      CmdInspect(inspect_net, inspect_start, inspect_end, inspect_porcelain, out);
    } else if (experiment->parsed()) {
      CmdExperiment(exp_flags, out);
    }
  } catch (const CommandError& e) {
    err << "error: " << e.message << "\n";
    return e.code;
  }
  return kExitOk;
}

}  // namespace bbtrain
