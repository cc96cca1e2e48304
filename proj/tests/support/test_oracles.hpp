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
//
// Brute-force reference implementations ("oracles") used to pin expected
// values in the test suite.  Everything here is deliberately naive -- direct
// definitions, full enumeration -- and shares no code with the fast paths it
// checks.

#ifndef QSQ_TESTS_SUPPORT_TEST_ORACLES_HPP_
#define QSQ_TESTS_SUPPORT_TEST_ORACLES_HPP_

#include <cstdint>
#include <vector>

#include "qsq/boolean_function.hpp"
#include "qsq/rng.hpp"

namespace qsq::testing {

/// Majority of three +-1 inputs (coordinate i enters as (-1)^{x_i}).
inline BooleanFunction maj3() {
  return BooleanFunction::from_function(3, [](std::uint32_t x) {
    const int a = (x & 1u) ? -1 : 1;
    const int b = (x & 2u) ? -1 : 1;
    const int c = (x & 4u) ? -1 : 1;
    return (a + b + c) > 0 ? 1 : -1;
  });
}

/// f^(S) straight from the definition: 2^{-n} sum_x f(x) chi_S(x).
inline double naive_fourier_coefficient(const BooleanFunction& f, SetIndex s) {
  double sum = 0.0;
  for (std::uint32_t x = 0; x < f.size(); ++x) {
    sum += static_cast<double>(f(x) * parity_character(s, x));
  }
  return sum / static_cast<double>(f.size());
}

inline std::vector<double> naive_spectrum(const BooleanFunction& f) {
  std::vector<double> coeffs(f.size());
  for (SetIndex s = 0; s < f.size(); ++s) {
    coeffs[s] = naive_fourier_coefficient(f, s);
  }
  return coeffs;
}

/// Influence via its combinatorial definition: Pr_x[f(x) != f(x ^ e_i)].
inline double flip_influence(const BooleanFunction& f, int coord) {
  const std::uint32_t mask = std::uint32_t{1} << coord;
  std::size_t flips = 0;
  for (std::uint32_t x = 0; x < f.size(); ++x) {
    if (f(x) != f(x ^ mask)) ++flips;
  }
  return static_cast<double>(flips) / static_cast<double>(f.size());
}

inline BooleanFunction random_boolean_function(int n, RandomStream& rng) {
  return BooleanFunction::from_function(
      n, [&rng](std::uint32_t) { return rng.bernoulli(0.5) ? 1 : -1; });
}

/// Random pattern with disjoint MustBeOne / MustBeZero masks.
inline SubsetPattern random_pattern(int n, RandomStream& rng) {
  const auto ones = static_cast<SetIndex>(rng.uniform_below(table_size(n)));
  const auto zeros =
      static_cast<SetIndex>(rng.uniform_below(table_size(n))) &
      static_cast<SetIndex>(~ones);
  return SubsetPattern(n, ones, zeros);
}

/// A Boolean function with a deliberately sparse heavy spectrum: the sign of
/// a few strong random characters plus small pointwise noise.  Useful for
/// exercising heavy-coefficient search with non-trivial targets.
inline BooleanFunction planted_sparse_function(int n, int planted,
                                               RandomStream& rng) {
  std::vector<SetIndex> sets;
  std::vector<double> coeffs;
  while (static_cast<int>(sets.size()) < planted) {
    const auto s = static_cast<SetIndex>(rng.uniform_below(table_size(n)));
    bool fresh = true;
    for (SetIndex seen : sets) fresh = fresh && seen != s;
    if (!fresh) continue;
    sets.push_back(s);
    coeffs.push_back((rng.bernoulli(0.5) ? 1.0 : -1.0) *
                     rng.uniform_in(0.4, 1.0));
  }
  return BooleanFunction::from_function(n, [&](std::uint32_t x) {
    double sum = rng.uniform_in(-0.25, 0.25);
    for (std::size_t j = 0; j < sets.size(); ++j) {
      sum += coeffs[j] * parity_character(sets[j], x);
    }
    return sign_of(sum);
  });
}

/// Random distribution with strictly positive entries.
inline std::vector<double> random_probability_vector(std::size_t size,
                                                     RandomStream& rng) {
  std::vector<double> probs(size);
  double sum = 0.0;
  for (double& p : probs) {
    p = rng.uniform01() + 1e-3;
    sum += p;
  }
  for (double& p : probs) p /= sum;
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < probs.size(); ++i) total += probs[i];
  probs.back() = 1.0 - total;
  return probs;
}

}  // namespace qsq::testing

#endif  // QSQ_TESTS_SUPPORT_TEST_ORACLES_HPP_
