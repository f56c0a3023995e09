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

#include "bbtrain/netfile.h"

#include <charconv>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "bbtrain/rng.h"

namespace bbtrain {
namespace {

struct Token {
  std::string_view text;
  int column = 0;
};

struct Field {
  std::string_view value;
  int column = 0;  // column of the value
};

// Thrown internally; converted to a Diagnostic at the API boundary.
struct ParseFailure {
  Diagnostic diagnostic;
};

[[noreturn]] void Fail(int line, int column, std::string_view token,
                       std::string message) {
  throw ParseFailure{Diagnostic{line, column, std::string(token),
                                std::move(message)}};
}

std::vector<Token> Tokenize(std::string_view line) {
  std::vector<Token> tokens;
  size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' ||
                               line[i] == '\r')) {
      ++i;
    }
    if (i >= line.size()) break;
    const size_t begin = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' &&
           line[i] != '\r') {
      ++i;
    }
    tokens.push_back(Token{line.substr(begin, i - begin),
                           static_cast<int>(begin) + 1});
  }
  return tokens;
}

class LineParser {
 public:
  LineParser(int line, std::vector<Token> tokens)
      : line_(line), tokens_(std::move(tokens)) {}

  int line() const { return line_; }
  const Token& token(size_t i) const { return tokens_[i]; }
  size_t size() const { return tokens_.size(); }

  // Splits tokens from `first` on as key=value pairs, checking the key set.
  std::map<std::string_view, Field> Fields(
      size_t first, std::initializer_list<std::string_view> keys) const {
    std::map<std::string_view, Field> fields;
    for (size_t i = first; i < tokens_.size(); ++i) {
      const Token& tok = tokens_[i];
      const size_t eq = tok.text.find('=');
      if (eq == std::string_view::npos || eq == 0) {
        Fail(line_, tok.column, tok.text, "expected key=value");
      }
      const std::string_view key = tok.text.substr(0, eq);
      bool known = false;
      for (std::string_view k : keys) known = known || k == key;
      if (!known) {
        Fail(line_, tok.column, tok.text,
             absl::StrCat("unknown key '", std::string(key), "'"));
      }
      if (fields.contains(key)) {
        Fail(line_, tok.column, tok.text,
             absl::StrCat("duplicate key '", std::string(key), "'"));
      }
      fields[key] =
          Field{tok.text.substr(eq + 1), tok.column + static_cast<int>(eq) + 1};
    }
    for (std::string_view k : keys) {
      if (!fields.contains(k)) {
        const int column = tokens_.empty() ? 1 : tokens_.front().column;
        Fail(line_, column, tokens_.front().text,
             absl::StrCat("missing key '", std::string(k), "'"));
      }
    }
    return fields;
  }

  uint64_t U64(std::string_view text, int column) const {
    uint64_t value = 0;
    const auto [ptr, ec] =
        std::from_chars(text.data(), text.data() + text.size(), value);
    if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
      Fail(line_, column, text, "expected a non-negative integer");
    }
    return value;
  }

  uint32_t Id(std::string_view text, int column) const {
    const uint64_t value = U64(text, column);
    if (value >= UINT32_MAX) Fail(line_, column, text, "id out of range");
    return static_cast<uint32_t>(value);
  }

  double Scalar(std::string_view text, int column) const {
    double value = 0.0;
    const auto [ptr, ec] =
        std::from_chars(text.data(), text.data() + text.size(), value);
    if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
      Fail(line_, column, text, "expected a decimal number");
    }
    return value;
  }

  double UnitScalar(std::string_view text, int column,
                    std::string_view what) const {
    const double value = Scalar(text, column);
    if (!IsUnitInterval(value)) {
      Fail(line_, column, text, absl::StrCat(std::string(what), " outside [0, 1]"));
    }
    return value;
  }

 private:
  int line_;
  std::vector<Token> tokens_;
};

struct RuleRecord {
  int line = 0;
  uint32_t input1 = 0, input2 = 0, output = 0;
  int input1_column = 0, input2_column = 0, output_column = 0;
  double weight1 = 0.0, lower = 0.0, upper = 1.0;
  std::vector<std::pair<uint32_t, int>> actions;  // (id, column)
  int actions_column = 0;
};

struct ActionRecord {
  int line = 0;
  uint32_t rule = 0;
  int rule_column = 0;
  double probability = 0.0;
};

struct ScenarioRecord {
  int line = 0;
  Scenario scenario;
  int start_column = 0, end_column = 0;
};

void ExpectSequentialId(const LineParser& p, size_t expected,
                        std::string_view kind) {
  if (p.size() < 2) {
    Fail(p.line(), p.token(0).column, p.token(0).text,
         absl::StrCat(std::string(kind), " record needs an id"));
  }
  const uint32_t id = p.Id(p.token(1).text, p.token(1).column);
  if (id != expected) {
    Fail(p.line(), p.token(1).column, p.token(1).text,
         absl::StrCat(std::string(kind), " id ", id, " out of sequence, expected ",
                      expected));
  }
}

NetDocument ParseOrThrow(std::string_view text) {
  NetDocument doc;
  std::vector<double> facts;
  std::vector<RuleRecord> rules;
  std::vector<ActionRecord> actions;
  std::optional<ScenarioRecord> scenario;
  uint64_t seed = 0;
  bool header_seen = false;
  bool rng_seen = false;

  int line_number = 0;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t newline = text.find('\n', pos);
    if (newline == std::string_view::npos) newline = text.size();
    const std::string_view raw = text.substr(pos, newline - pos);
    pos = newline + 1;
    ++line_number;

    LineParser p(line_number, Tokenize(raw));
    if (p.size() == 0 || p.token(0).text.front() == '#') {
      if (newline == text.size()) break;
      continue;
    }
    const Token& kind = p.token(0);
    if (!header_seen) {
      if (kind.text != kNetFileMagic) {
        Fail(line_number, kind.column, kind.text,
             "expected header 'bbn 1'");
      }
      if (p.size() != 2) {
        Fail(line_number, kind.column, kind.text,
             "header takes exactly one version number");
      }
      const uint64_t version = p.U64(p.token(1).text, p.token(1).column);
      if (version != static_cast<uint64_t>(kNetFileVersion)) {
        Fail(line_number, p.token(1).column, p.token(1).text,
             absl::StrCat("unsupported version ", version));
      }
      header_seen = true;
    } else if (kind.text == "rng") {
      if (rng_seen) Fail(line_number, kind.column, kind.text, "duplicate rng record");
      rng_seen = true;
      auto fields = p.Fields(1, {"algorithm", "seed"});
      doc.rng_algorithm = std::string(fields["algorithm"].value);
      seed = p.U64(fields["seed"].value, fields["seed"].column);
    } else if (kind.text == "fact") {
      ExpectSequentialId(p, facts.size(), "fact");
      if (p.size() != 3) {
        Fail(line_number, kind.column, kind.text,
             "fact record is 'fact <id> <value>'");
      }
      facts.push_back(
          p.UnitScalar(p.token(2).text, p.token(2).column, "fact value"));
    } else if (kind.text == "rule") {
      ExpectSequentialId(p, rules.size(), "rule");
      auto f = p.Fields(2, {"in1", "w1", "in2", "out", "lo", "hi", "actions"});
      RuleRecord rule;
      rule.line = line_number;
      rule.input1 = p.Id(f["in1"].value, f["in1"].column);
      rule.input1_column = f["in1"].column;
      rule.input2 = p.Id(f["in2"].value, f["in2"].column);
      rule.input2_column = f["in2"].column;
      rule.output = p.Id(f["out"].value, f["out"].column);
      rule.output_column = f["out"].column;
      rule.weight1 = p.UnitScalar(f["w1"].value, f["w1"].column, "weight");
      rule.lower = p.UnitScalar(f["lo"].value, f["lo"].column, "lower threshold");
      rule.upper = p.UnitScalar(f["hi"].value, f["hi"].column, "upper threshold");
      if (rule.lower > rule.upper) {
        Fail(line_number, f["lo"].column, f["lo"].value,
             "lower threshold exceeds upper threshold");
      }
      rule.actions_column = f["actions"].column;
      std::string_view list = f["actions"].value;
      int column = f["actions"].column;
      while (!list.empty()) {
        const size_t comma = list.find(',');
        const std::string_view item = list.substr(0, comma);
        rule.actions.emplace_back(p.Id(item, column), column);
        if (comma == std::string_view::npos) break;
        list.remove_prefix(comma + 1);
        column += static_cast<int>(comma) + 1;
        if (list.empty()) Fail(line_number, column, "", "trailing comma in actions list");
      }
      rules.push_back(std::move(rule));
    } else if (kind.text == "action") {
      ExpectSequentialId(p, actions.size(), "action");
      auto f = p.Fields(2, {"rule", "p"});
      actions.push_back(ActionRecord{
          line_number, p.Id(f["rule"].value, f["rule"].column),
          f["rule"].column,
          p.UnitScalar(f["p"].value, f["p"].column, "fire probability")});
    } else if (kind.text == "scenario") {
      if (scenario.has_value()) {
        Fail(line_number, kind.column, kind.text, "duplicate scenario record");
      }
      auto f = p.Fields(1, {"start", "start_value", "end", "target", "valid"});
      ScenarioRecord record;
      record.line = line_number;
      record.scenario.start = FactId(p.Id(f["start"].value, f["start"].column));
      record.start_column = f["start"].column;
      record.scenario.end = FactId(p.Id(f["end"].value, f["end"].column));
      record.end_column = f["end"].column;
      record.scenario.start_value = p.UnitScalar(
          f["start_value"].value, f["start_value"].column, "start value");
      record.scenario.target =
          p.UnitScalar(f["target"].value, f["target"].column, "target");
      const uint64_t valid = p.U64(f["valid"].value, f["valid"].column);
      if (valid > 1) {
        Fail(line_number, f["valid"].column, f["valid"].value,
             "valid must be 0 or 1");
      }
      record.scenario.valid = valid == 1;
      scenario = record;
    } else if (kind.text == kNetFileMagic) {
      Fail(line_number, kind.column, kind.text, "duplicate header");
    } else {
      Fail(line_number, kind.column, kind.text,
           absl::StrCat("unknown record kind '", std::string(kind.text), "'"));
    }
    if (newline == text.size()) break;
  }
  if (!header_seen) Fail(1, 1, "", "missing header 'bbn 1'");

  // References are resolved once every record is known.
  auto check_fact = [&](uint32_t id, int line, int column) {
    if (id >= facts.size()) {
      Fail(line, column, std::to_string(id),
           absl::StrCat("dangling reference to fact ", id));
    }
  };
  std::vector<std::vector<uint32_t>> owned(rules.size());
  for (size_t i = 0; i < actions.size(); ++i) {
    const ActionRecord& action = actions[i];
    if (action.rule >= rules.size()) {
      Fail(action.line, action.rule_column, std::to_string(action.rule),
           absl::StrCat("dangling reference to rule ", action.rule));
    }
    owned[action.rule].push_back(static_cast<uint32_t>(i));
  }
  for (size_t r = 0; r < rules.size(); ++r) {
    const RuleRecord& rule = rules[r];
    check_fact(rule.input1, rule.line, rule.input1_column);
    check_fact(rule.input2, rule.line, rule.input2_column);
    check_fact(rule.output, rule.line, rule.output_column);
    for (const auto& [id, column] : rule.actions) {
      if (id >= actions.size()) {
        Fail(rule.line, column, std::to_string(id),
             absl::StrCat("dangling reference to action ", id));
      }
    }
    std::vector<uint32_t> listed;
    for (const auto& entry : rule.actions) listed.push_back(entry.first);
    if (listed != owned[r]) {
      Fail(rule.line, rule.actions_column, absl::StrJoin(listed, ","),
           absl::StrCat("actions list of rule ", r,
                        " does not match the actions declaring rule=", r,
                        " (expected '", absl::StrJoin(owned[r], ","), "')"));
    }
  }
  if (scenario.has_value()) {
    check_fact(scenario->scenario.start.value(), scenario->line,
               scenario->start_column);
    check_fact(scenario->scenario.end.value(), scenario->line,
               scenario->end_column);
    doc.scenario = scenario->scenario;
  }

  Network network(seed);
  for (double value : facts) (void)network.AddFact(value);
  for (const RuleRecord& rule : rules) {
    absl::StatusOr<RuleId> id =
        network.AddRule(FactId(rule.input1), rule.weight1, FactId(rule.input2),
                        FactId(rule.output), rule.lower, rule.upper);
    if (!id.ok()) {
      Fail(rule.line, 1, "rule", std::string(id.status().message()));
    }
  }
  for (const ActionRecord& action : actions) {
    (void)network.AddAction(RuleId(action.rule), action.probability);
  }
  if (absl::Status status = network.Validate(); !status.ok()) {
    Fail(line_number, 1, "", std::string(status.message()));
  }
  doc.network = std::move(network);
  if (doc.rng_algorithm.empty()) doc.rng_algorithm = std::string(Rng::kAlgorithmId);
  return doc;
}

}  // namespace

std::string Diagnostic::ToString() const {
  std::string text = absl::StrCat("line ", line, ", column ", column, ": ",
                                  message);
  if (!token.empty()) absl::StrAppend(&text, " (at '", token, "')");
  return text;
}

std::string FormatScalar(double value) {
  char buffer[64];
  const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, result.ptr);
}

std::string SerializeNetwork(const Network& network, const Scenario* scenario) {
  std::string out;
  absl::StrAppend(&out, std::string(kNetFileMagic), " ", kNetFileVersion, "\n");
  absl::StrAppend(&out, "rng algorithm=", std::string(Rng::kAlgorithmId),
                  " seed=", network.rng_seed(), "\n");
  const auto facts = network.fact_values();
  for (size_t i = 0; i < facts.size(); ++i) {
    absl::StrAppend(&out, "fact ", i, " ", FormatScalar(facts[i]), "\n");
  }
  for (const Rule& rule : network.rules()) {
    absl::StrAppend(&out, "rule ", rule.id.value(), " in1=", rule.input1.value(),
                    " w1=", FormatScalar(rule.weight1),
                    " in2=", rule.input2.value(), " out=", rule.output.value(),
                    " lo=", FormatScalar(rule.lower),
                    " hi=", FormatScalar(rule.upper), " actions=",
                    absl::StrJoin(rule.actions, ",",
                                  [](std::string* s, ActionId id) {
                                    absl::StrAppend(s, id.value());
                                  }),
                    "\n");
  }
  for (const Action& action : network.actions()) {
    absl::StrAppend(&out, "action ", action.id.value(),
                    " rule=", action.rule.value(),
                    " p=", FormatScalar(action.fire_probability), "\n");
  }
  if (scenario != nullptr) {
    absl::StrAppend(&out, "scenario start=", scenario->start.value(),
                    " start_value=", FormatScalar(scenario->start_value),
                    " end=", scenario->end.value(),
                    " target=", FormatScalar(scenario->target),
                    " valid=", scenario->valid ? 1 : 0, "\n");
  }
  return out;
}

absl::StatusOr<NetDocument> ParseNetFile(std::string_view text,
                                         Diagnostic* diagnostic) {
  try {
    return ParseOrThrow(text);
  } catch (const ParseFailure& failure) {
    if (diagnostic != nullptr) *diagnostic = failure.diagnostic;
    return absl::InvalidArgumentError(failure.diagnostic.ToString());
  }
}

}  // namespace bbtrain
