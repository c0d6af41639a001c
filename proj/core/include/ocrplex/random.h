// Copyright 2026 The Ocrplex Authors
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

#ifndef OCRPLEX_RANDOM_H_
#define OCRPLEX_RANDOM_H_

#include <array>
#include <cstdint>
#include <limits>

namespace ocrplex {

// Philox4x32-10 block function (Salmon et al., "Parallel random numbers: as
// easy as 1, 2, 3"). Exposed for known-answer testing.
std::array<std::uint32_t, 4> Philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

// 64-bit finalizer from SplitMix64. Used to derive child seeds.
std::uint64_t Mix64(std::uint64_t x);
std::uint64_t DeriveSeed(std::uint64_t seed, std::uint64_t a,
                         std::uint64_t b = 0);

// Counter-based generator addressed by (seed, stream). Two generators with the
// same address produce the same sequence regardless of how work is split
// across threads, so every Monte Carlo sample owns its own stream.
//
// Satisfies std::uniform_random_bit_generator.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  CounterRng(std::uint64_t seed, std::uint64_t stream);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()();

  // Uniform double in [0, 1) with 53 random bits.
  double NextDouble();

  // Uniform integer in [0, bound). bound must be positive.
  std::uint64_t NextBelow(std::uint64_t bound);

  bool Bernoulli(double p) { return NextDouble() < p; }

 private:
  void Refill();

  std::array<std::uint32_t, 2> key_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  std::array<std::uint32_t, 4> buffer_{};
  int next_ = 4;  // index into buffer_ in 32-bit words
};

}  // namespace ocrplex

#endif  // OCRPLEX_RANDOM_H_
