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

#include "bbtrain/grid_config.h"

#include <charconv>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/ascii.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_split.h"
#include "absl/strings/string_view.h"

namespace bbtrain {
namespace {

constexpr int kIterationLevels[] = {10, 100, 250, 500};
constexpr double kVelocityLevels[] = {0.025, 0.05, 0.1, 0.2, 0.25};
constexpr int kActionLevels[] = {0, 50, 100, 250, 500};
constexpr double kFireLevels[] = {0.25, 0.5, 0.75, 1.0};
constexpr ThresholdMode kThresholdLevels[] = {
    ThresholdMode::kFull01, ThresholdMode::kBand02To08, ThresholdMode::kRandom,
    ThresholdMode::kRandomMinSep05};

template <typename T>
bool ParseNumber(absl::string_view text, T& out) {
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), out);
  return !text.empty() && ec == std::errc() &&
         ptr == text.data() + text.size();
}

absl::Status LineError(int line, absl::string_view message) {
  return absl::InvalidArgumentError(absl::StrCat("line ", line, ": ", message));
}

absl::Status ApplyKey(Condition& condition, absl::string_view key,
                      absl::string_view value, int line) {
  auto count = [&](int& field) -> absl::Status {
    if (!ParseNumber(value, field) || field < 0) {
      return LineError(line, absl::StrCat(key, " expects a non-negative integer, got '", value, "'"));
    }
    return absl::OkStatus();
  };
  auto unit = [&](double& field) -> absl::Status {
    if (!ParseNumber(value, field) || !IsUnitInterval(field)) {
      return LineError(line, absl::StrCat(key, " expects a value in [0, 1], got '", value, "'"));
    }
    return absl::OkStatus();
  };
  if (key == "fact_count") return count(condition.gen.fact_count);
  if (key == "rule_count") return count(condition.gen.rule_count);
  if (key == "action_count") return count(condition.gen.action_count);
  if (key == "rule_weights") return unit(condition.gen.initial_weight);
  if (key == "action_fire_probability") {
    return unit(condition.gen.action_fire_probability);
  }
  if (key == "velocity") {
    if (!ParseNumber(value, condition.velocity) || !(condition.velocity > 0.0) ||
        condition.velocity > 1.0) {
      return LineError(line, absl::StrCat("velocity expects a value in (0, 1], got '", value, "'"));
    }
    return absl::OkStatus();
  }
  if (key == "iteration_count") {
    if (!ParseNumber(value, condition.iterations) || condition.iterations <= 0) {
      return LineError(line, absl::StrCat("iteration_count expects a positive integer, got '", value, "'"));
    }
    return absl::OkStatus();
  }
  if (key == "trials") {
    if (!ParseNumber(value, condition.trials) || condition.trials <= 0) {
      return LineError(line, absl::StrCat("trials expects a positive integer, got '", value, "'"));
    }
    return absl::OkStatus();
  }
  if (key == "trigger_range") {
    absl::StatusOr<ThresholdMode> mode = ParseThresholdMode(std::string_view(value.data(), value.size()));
    if (!mode.ok()) return LineError(line, mode.status().message());
    condition.gen.threshold_mode = *mode;
    return absl::OkStatus();
  }
  if (key == "retain_best") {
    if (value == "true" || value == "1") {
      condition.retain_best = true;
    } else if (value == "false" || value == "0") {
      condition.retain_best = false;
    } else {
      return LineError(line, absl::StrCat("retain_best expects true or false, got '", value, "'"));
    }
    return absl::OkStatus();
  }
  if (key == "name") {
    if (value.find(',') != absl::string_view::npos) {
      return LineError(line, "name may not contain ','");
    }
    condition.name = std::string(value);
    return absl::OkStatus();
  }
  return LineError(line, absl::StrCat("unknown key '", key, "'"));
}

Condition With(Condition base, std::string name) {
  base.name = std::move(name);
  return base;
}

Condition WithActions(Condition base) {
  base.gen.action_count = kStandardActionCount;
  base.gen.action_fire_probability = kStandardFireProbability;
  return base;
}

}  // namespace

Condition StandardCondition() {
  Condition condition;
  condition.name = "standard";
  condition.gen.fact_count = 100;
  condition.gen.rule_count = 100;
  condition.gen.action_count = 0;
  condition.gen.initial_weight = 0.5;
  condition.gen.threshold_mode = ThresholdMode::kRandomMinSep05;
  condition.gen.action_fire_probability = 0.0;
  condition.velocity = 0.1;
  condition.iterations = 10;
  condition.trials = 1000;
  return condition;
}

std::vector<Condition> BuiltinGrid() {
  const Condition standard = StandardCondition();
  std::vector<Condition> grid;
  for (int facts : {50, 100, 250, 500}) {
    Condition c = With(standard, absl::StrCat("facts_", facts));
    c.gen.fact_count = facts;
    grid.push_back(c);
  }
  for (int rules : {50, 100, 250, 500}) {
    Condition c = With(standard, absl::StrCat("rules_", rules));
    c.gen.rule_count = rules;
    grid.push_back(c);
  }
  for (int actions : kActionLevels) {
    Condition c = With(WithActions(standard), absl::StrCat("actions_", actions));
    c.gen.action_count = actions;
    grid.push_back(c);
  }
  for (int iterations : kIterationLevels) {
    Condition c = With(standard, absl::StrCat("iterations_", iterations));
    c.iterations = iterations;
    grid.push_back(c);
  }
  for (double velocity : kVelocityLevels) {
    Condition c = With(standard, absl::StrCat("velocity_", velocity));
    c.iterations = 100;
    c.velocity = velocity;
    grid.push_back(c);
  }
  for (ThresholdMode mode : kThresholdLevels) {
    Condition c = With(standard, absl::StrCat("trigger_", std::string(ThresholdModeName(mode))));
    c.gen.threshold_mode = mode;
    grid.push_back(c);
  }
  for (double p : kFireLevels) {
    Condition c = With(WithActions(standard), absl::StrCat("fire_", p));
    c.gen.action_fire_probability = p;
    grid.push_back(c);
  }
  for (int iterations : kIterationLevels) {
    for (double velocity : kVelocityLevels) {
      Condition c = With(standard, absl::StrCat("iterations_", iterations,
                                                "_velocity_", velocity));
      c.iterations = iterations;
      c.velocity = velocity;
      grid.push_back(c);
    }
  }
  for (int iterations : kIterationLevels) {
    for (int actions : {50, 100, 250, 500}) {
      Condition c = With(WithActions(standard),
                         absl::StrCat("iterations_", iterations, "_actions_",
                                      actions));
      c.iterations = iterations;
      c.gen.action_count = actions;
      grid.push_back(c);
    }
  }
  for (int iterations : kIterationLevels) {
    for (double p : kFireLevels) {
      Condition c = With(WithActions(standard),
                         absl::StrCat("iterations_", iterations, "_fire_", p));
      c.iterations = iterations;
      c.gen.action_fire_probability = p;
      grid.push_back(c);
    }
  }
  for (int iterations : kIterationLevels) {
    for (ThresholdMode mode : kThresholdLevels) {
      Condition c = With(WithActions(standard),
                         absl::StrCat("iterations_", iterations, "_trigger_",
                                      std::string(ThresholdModeName(mode))));
      c.iterations = iterations;
      c.gen.threshold_mode = mode;
      grid.push_back(c);
    }
  }
  for (int iterations : {100, 250, 500}) {
    Condition c = With(standard, absl::StrCat("retain_best_", iterations));
    c.iterations = iterations;
    c.retain_best = true;
    grid.push_back(c);
  }
  for (size_t i = 0; i < grid.size(); ++i) grid[i].id = static_cast<int>(i);
  return grid;
}

absl::StatusOr<std::vector<Condition>> ParseGridConfig(std::string_view std_text) {
  const absl::string_view text(std_text.data(), std_text.size());
  std::vector<Condition> grid;
  Condition current = StandardCondition();
  std::vector<std::string> keys_seen;
  bool in_block = false;
  int line_number = 0;
  int block_line = 0;
  auto close_block = [&]() -> absl::Status {
    if (!in_block) return absl::OkStatus();
    if (absl::Status status = current.gen.Validate(); !status.ok()) {
      return LineError(block_line, status.message());
    }
    current.id = static_cast<int>(grid.size());
    if (current.name == "standard") current.name = absl::StrCat("condition_", current.id);
    grid.push_back(current);
    current = StandardCondition();
    keys_seen.clear();
    in_block = false;
    return absl::OkStatus();
  };
  for (absl::string_view raw : absl::StrSplit(text, '\n')) {
    ++line_number;
    absl::string_view line = raw;
    if (const size_t hash = line.find('#'); hash != absl::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = absl::StripAsciiWhitespace(line);
    if (line.empty()) {
      // Blank (or comment-only) lines end a block only if truly blank.
      if (absl::StripAsciiWhitespace(raw).empty()) {
        if (absl::Status status = close_block(); !status.ok()) return status;
      }
      continue;
    }
    const size_t eq = line.find('=');
    if (eq == absl::string_view::npos) {
      return LineError(line_number, absl::StrCat("expected key = value, got '", line, "'"));
    }
    const absl::string_view key = absl::StripAsciiWhitespace(line.substr(0, eq));
    const absl::string_view value =
        absl::StripAsciiWhitespace(line.substr(eq + 1));
    for (const std::string& seen : keys_seen) {
      if (seen == key) {
        return LineError(line_number, absl::StrCat("duplicate key '", key, "' in block"));
      }
    }
    keys_seen.emplace_back(key);
    if (!in_block) block_line = line_number;
    if (absl::Status status = ApplyKey(current, key, value, line_number);
        !status.ok()) {
      return status;
    }
    in_block = true;
  }
  if (absl::Status status = close_block(); !status.ok()) return status;
  if (grid.empty()) {
    return absl::InvalidArgumentError("grid file defines no conditions");
  }
  return grid;
}

}  // namespace bbtrain
