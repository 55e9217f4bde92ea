// Copyright 2026 The genfuse Authors.
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

#ifndef GENFUSE_RNG_HPP_
#define GENFUSE_RNG_HPP_

#include <cstddef>
#include <cstdint>
#include <random>

namespace genfuse {

// Portable random stream: 64-bit Mersenne Twister (std::mt19937_64, whose
// output sequence is fixed by the standard) with hand-written variate
// transforms. The std distributions are implementation-defined, so they are
// not used anywhere a seed must reproduce across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t NextU64() { return engine_(); }

  // Uniform on [0, 1) with 53 random mantissa bits.
  double Uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Uniform on [0, 1]; used for genes so both bounds are reachable.
  double UniformClosed01() {
    return static_cast<double>(engine_() >> 11) * (1.0 / 9007199254740991.0);
  }

  // Uniform integer in [0, n), unbiased by rejection. n must be positive.
  std::size_t UniformIndex(std::size_t n) {
    const std::uint64_t bound = static_cast<std::uint64_t>(n);
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      const std::uint64_t r = engine_();
      if (r >= threshold) return static_cast<std::size_t>(r % bound);
    }
  }

  bool Coin() { return (engine_() >> 63) != 0; }

  bool Bernoulli(double p) { return Uniform01() < p; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace genfuse

#endif  // GENFUSE_RNG_HPP_
