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


#include "test_networks.h"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace bbtrain::testing {

Network Fig6Network() {
  Network network;
  for (int i = 0; i < 6; ++i) (void)network.AddFact(0.0).value();
  (void)network.AddRule(FactId(0), 0.5, FactId(1), FactId(5), 0.0, 1.0).value();
  (void)network.AddRule(FactId(1), 0.8, FactId(2), FactId(3), 0.0, 1.0).value();
  (void)network.AddRule(FactId(3), 0.6, FactId(4), FactId(5), 0.0, 1.0).value();
  return network;
}

Network RandomNetwork(Rng& rng, int fact_count, int rule_count) {
  return RandomNetworkWithActions(rng, fact_count, rule_count, 0, 0.0);
}

Network RandomNetworkWithActions(Rng& rng, int fact_count, int rule_count,
                                 int action_count, double fire_probability) {
  Network network;
  for (int i = 0; i < fact_count; ++i) {
    (void)network.AddFact(rng.Uniform01()).value();
  }
  auto pick = [&] {
    return FactId(static_cast<uint32_t>(rng.UniformIndex(fact_count)));
  };
  for (int i = 0; i < rule_count; ++i) {
    const FactId in1 = pick();
    const FactId in2 = pick();
    const FactId out = pick();
    const double w1 = rng.Uniform01();
    double lo = rng.Uniform01();
    double hi = rng.Uniform01();
    if (lo > hi) std::swap(lo, hi);
    (void)network.AddRule(in1, w1, in2, out, lo, hi).value();
  }
  for (int i = 0; i < action_count && rule_count > 0; ++i) {
    const RuleId rule(static_cast<uint32_t>(rng.UniformIndex(rule_count)));
    (void)network.AddAction(rule, fire_probability).value();
  }
  return network;
}

std::string ReadTestData(const std::string& name) {
  const std::string path = std::string(BBTRAIN_TEST_DATA_DIR) + "/" + name;
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

}  // namespace bbtrain::testing
