// Copyright 2026 The offgame Authors.
//
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

#ifndef OFFGAME_RNG_HPP
#define OFFGAME_RNG_HPP

#include <cstdint>
#include <random>
#include <vector>

namespace offgame {

// Deterministic random source. std::mt19937_64 has a fully specified output
// sequence; the distribution helpers below are hand-rolled because the
// standard library distribution objects are implementation-defined and would
// break byte-for-byte reproducibility across toolchains.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform double in [0, 1) with 53 random bits.
  double next_unit() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Uniform double in [lo, hi).
  double next_in(double lo, double hi) { return lo + (hi - lo) * next_unit(); }

  // Uniform integer in [0, n). n must be positive. The modulo bias is
  // irrelevant at the sizes used here and keeps the mapping portable.
  std::uint64_t next_below(std::uint64_t n) { return engine_() % n; }

  // In-place Fisher-Yates shuffle with the portable index sampler above.
  template <typename T> void shuffle(std::vector<T> &v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(next_below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

private:
  std::mt19937_64 engine_;
};

} // namespace offgame

#endif // OFFGAME_RNG_HPP
