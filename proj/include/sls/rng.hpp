// Copyright 2026 The sls-rl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SLS_RNG_HPP_
#define SLS_RNG_HPP_

#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>

namespace sls {

// SplitMix64 generator. The whole state is a single word, so game states,
// replay buffers and checkpoints can carry it by value and serialize it
// exactly.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  constexpr SplitMix64() = default;
  constexpr explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  constexpr result_type operator()() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  constexpr std::uint64_t state() const { return state_; }
  constexpr void set_state(std::uint64_t s) { state_ = s; }

  friend constexpr bool operator==(const SplitMix64&,
                                   const SplitMix64&) = default;

 private:
  std::uint64_t state_ = 0;
};

// Uniform integer in [0, n). n must be positive.
inline std::size_t UniformIndex(SplitMix64& rng, std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

// Uniform real in [0, 1).
inline double UniformUnit(SplitMix64& rng) {
  return std::generate_canonical<double, 64>(rng);
}

// Derives an independent stream seed from a base seed and a stream index.
constexpr std::uint64_t MixSeed(std::uint64_t base, std::uint64_t index) {
  SplitMix64 g(base ^ (index * 0xD1B54A32D192ED03ULL));
  g();
  return g();
}

}  // namespace sls

#endif  // SLS_RNG_HPP_
