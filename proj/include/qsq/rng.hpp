// Copyright 2026 The QSQ Authors
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

#ifndef QSQ_RNG_HPP_
#define QSQ_RNG_HPP_

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string_view>

namespace qsq {

/// Deterministic stream of pseudo-random draws.
///
/// Every stochastic site in the library owns one RandomStream, derived from a
/// single global seed plus a site name (and optionally a trial index) via
/// `derive`.  Adding a new site therefore never perturbs the draws of existing
/// ones, and a (seed, site, index) triple reproduces byte-identical results on
/// every platform: all floating-point draws are built from raw mt19937_64
/// words, never from distribution objects with unspecified algorithms.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  /// Derives the stream for a named stochastic site under a global seed.
  static RandomStream derive(std::uint64_t global_seed, std::string_view site,
                             std::uint64_t index = 0) {
    std::uint64_t h = 1469598103934665603ULL;  // FNV-1a over the site name.
    for (char c : site) {
      h ^= static_cast<unsigned char>(c);
      h *= 1099511628211ULL;
    }
    std::uint64_t mixed = split_mix(global_seed);
    mixed = split_mix(mixed ^ h);
    mixed = split_mix(mixed ^ (index * 0x9e3779b97f4a7c15ULL));
    return RandomStream(mixed);
  }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform double in [0, 1), 53-bit resolution.
  double uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform double in the open interval (0, 1); safe for log transforms.
  double uniform01_open() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  double uniform_in(double lo, double hi) {
    return lo + (hi - lo) * uniform01();
  }

  /// Unbiased integer in [0, bound); rejection sampling, bound >= 1.
  std::uint64_t uniform_below(std::uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("uniform_below: bound == 0");
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t draw;
    do {
      draw = next_u64();
    } while (draw >= limit);
    return draw % bound;
  }

  bool bernoulli(double p) { return uniform01() < p; }

  /// k independent uniform bits packed into the low positions, 0 <= k <= 32.
  std::uint32_t random_bits(int k) {
    if (k < 0 || k > 32) throw std::invalid_argument("random_bits: bad k");
    if (k == 0) return 0;
    return static_cast<std::uint32_t>(next_u64() >> (64 - k));
  }

 private:
  static std::uint64_t split_mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::mt19937_64 engine_;
};

}  // namespace qsq

#endif  // QSQ_RNG_HPP_
