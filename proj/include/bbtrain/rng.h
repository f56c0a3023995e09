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

#ifndef BBTRAIN_RNG_H_
#define BBTRAIN_RNG_H_

#include <cstdint>
#include <random>
#include <span>
#include <string_view>

namespace bbtrain {

// Seedable 64-bit generator used everywhere randomness enters the system.
//
// The engine is std::mt19937_64, whose output sequence is fixed by the C++
// standard. The standard distributions are implementation-defined, so the
// mapping from raw 64-bit words to doubles, indices and shuffles is done here
// explicitly. Together this makes every seeded run reproducible across
// standard libraries and languages.
class Rng {
 public:
  // Identifier written into file headers and CSV metadata.
  static constexpr std::string_view kAlgorithmId = "mt19937_64";

  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t NextU64() { return engine_(); }

  // Uniform double in [0, 1) built from the top 53 bits of one word.
  double Uniform01();

  // Uniform double in [lo, hi].
  double Uniform(double lo, double hi);

  // Uniform integer in [0, bound). `bound` must be positive. Unbiased
  // (rejection on the low multiply word).
  uint64_t UniformIndex(uint64_t bound);

  // True with probability `p`; p <= 0 never fires and p >= 1 always fires.
  bool Bernoulli(double p);

  // Fisher-Yates, last position first.
  template <typename T>
  void Shuffle(std::span<T> items) {
    for (size_t i = items.size(); i > 1; --i) {
      const size_t j = static_cast<size_t>(UniformIndex(i));
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

// SplitMix64 finalizer. Used to derive independent stream seeds.
constexpr uint64_t MixSeed(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Combines values into one seed by chained mixing: MixSeed(MixSeed(a) ^ b)...
constexpr uint64_t MixSeed(uint64_t a, uint64_t b) {
  return MixSeed(MixSeed(a) ^ b);
}
constexpr uint64_t MixSeed(uint64_t a, uint64_t b, uint64_t c) {
  return MixSeed(MixSeed(a, b) ^ c);
}

}  // namespace bbtrain

#endif  // BBTRAIN_RNG_H_
