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

#ifndef QSQ_LEARNERS_HPP_
#define QSQ_LEARNERS_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qsq/boolean_function.hpp"
#include "qsq/concepts.hpp"
#include "qsq/observable.hpp"
#include "qsq/oracle.hpp"

namespace qsq {

// All learners in this header expect a noiseless oracle over the uniform
// distribution.  Noisy targets are handled by wrapping them in an emulator
// that presents this same noiseless interface (see pac.hpp).
//
// Convention: a Fourier-mass query at raw tolerance t returns half of the
// true mass up to t, so learners double the response and reason about the
// doubled value with effective tolerance 2t.

struct PhaseCount {
  std::string name;
  std::size_t queries = 0;
};

/// What a learner hands back: the hypothesis plus query accounting.
struct LearnerReport {
  Hypothesis hypothesis;
  std::size_t queries_used = 0;
  double min_tolerance_used = std::numeric_limits<double>::infinity();
  std::vector<PhaseCount> phases;
};

namespace internal {

template <QstatOracleLike Oracle>
void require_clean_uniform_oracle(const Oracle& oracle, int n,
                                  const char* who) {
  if (oracle.dimension() != n) {
    throw std::invalid_argument(std::string(who) +
                                ": oracle dimension mismatch");
  }
  if (!oracle.uniform_distribution()) {
    throw std::invalid_argument(std::string(who) +
                                ": oracle must use the uniform distribution");
  }
  if (oracle.noise_rate() != 0.0) {
    throw std::invalid_argument(
        std::string(who) +
        ": oracle must be noiseless (wrap noisy targets in the emulator)");
  }
}

/// Ascending enumeration of the subsets of `mask` (including 0 and mask).
template <typename Fn>
void for_each_submask(SetIndex mask, Fn&& fn) {
  SetIndex sub = 0;
  while (true) {
    fn(sub);
    if (sub == mask) break;
    sub = (sub - mask) & mask;
  }
}

}  // namespace internal

/// Recovers the hidden parity chi_s with exactly n Fourier-mass queries at
/// raw tolerance 1/6: the doubled estimate of each influence is within 1/3
/// of 0 or 1, so thresholding at 1/2 decides every coordinate even against a
/// worst-case legal oracle.
template <QstatOracleLike Oracle>
LearnerReport learn_parity(Oracle& oracle, int n) {
  check_dimension(n);
  internal::require_clean_uniform_oracle(oracle, n, "learn_parity");
  constexpr double kTau = 1.0 / 6.0;
  SetIndex s = 0;
  for (int i = 0; i < n; ++i) {
    const double answer = oracle.qstat(
        fourier_mass_observable(SubsetPattern::influence_of(n, i)), kTau);
    if (2.0 * answer >= 0.5) s |= SetIndex{1} << i;
  }
  return LearnerReport{Hypothesis::parity(n, s), static_cast<std::size_t>(n),
                       kTau,
                       {PhaseCount{"influence", static_cast<std::size_t>(n)}}};
}

/// Learns a k-junta to error epsilon: influence queries locate the relevant
/// coordinates T (doubled threshold epsilon / 4k against doubled tolerance
/// epsilon / 5k), then one coefficient query per subset of T at tolerance
/// sqrt(epsilon/2) 2^{-k/2} builds the sign hypothesis.  Exactly n + 2^|T|
/// queries (one query total when k = 0).
template <QstatOracleLike Oracle>
LearnerReport learn_junta(Oracle& oracle, int n, int k, double epsilon) {
  check_dimension(n);
  internal::require_clean_uniform_oracle(oracle, n, "learn_junta");
  if (k < 0 || k > n) {
    throw std::invalid_argument("learn_junta: arity out of range");
  }
  if (std::size_t{1} << k > 4096) {
    throw std::invalid_argument("learn_junta: 2^k exceeds the 4096 cap");
  }
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw std::invalid_argument("learn_junta: epsilon must lie in (0, 1)");
  }

  const double coeff_tau =
      std::sqrt(epsilon / 2.0) * std::pow(2.0, -0.5 * k);

  if (k == 0) {
    const double alpha = oracle.qstat(coefficient_observable(n, 0), coeff_tau);
    return LearnerReport{Hypothesis(n, {{0, alpha}}), 1, coeff_tau,
                         {PhaseCount{"coefficients", 1}}};
  }

  const double influence_tau = epsilon / (10.0 * k);
  const double membership = epsilon / (4.0 * k);
  SetIndex relevant = 0;
  for (int i = 0; i < n; ++i) {
    const double answer = oracle.qstat(
        fourier_mass_observable(SubsetPattern::influence_of(n, i)),
        influence_tau);
    if (2.0 * answer >= membership) relevant |= SetIndex{1} << i;
  }

  std::vector<Hypothesis::Entry> entries;
  internal::for_each_submask(relevant, [&](SetIndex v) {
    const double alpha = oracle.qstat(coefficient_observable(n, v), coeff_tau);
    entries.push_back(Hypothesis::Entry{v, alpha});
  });

  const auto coeff_queries = entries.size();
  return LearnerReport{
      Hypothesis(n, std::move(entries)),
      static_cast<std::size_t>(n) + coeff_queries,
      std::min(influence_tau, coeff_tau),
      {PhaseCount{"influence", static_cast<std::size_t>(n)},
       PhaseCount{"coefficients", coeff_queries}}};
}

/// Accounting attached to a Goldreich-Levin run.
struct GoldreichLevinStats {
  std::size_t bucket_queries = 0;
  std::size_t confirmation_queries = 0;
};

/// Finds every set with |f^(S)| >= tau (and nothing below tau / 2) by
/// recursive bucket splitting: fix coordinates one at a time, keep buckets
/// whose doubled mass estimate (raw tolerance tau^2 / 8) stays >= tau^2 / 2,
/// then confirm surviving singletons with coefficient queries at tolerance
/// tau / 4, keeping |estimate| >= 3 tau / 4.  The guarantees hold against any
/// legal oracle, worst-case included.
template <QstatOracleLike Oracle>
std::vector<SetIndex> goldreich_levin(Oracle& oracle, int n, double tau,
                                      GoldreichLevinStats* stats = nullptr) {
  check_dimension(n);
  internal::require_clean_uniform_oracle(oracle, n, "goldreich_levin");
  if (!(tau > 0.0 && tau <= 1.0)) {
    throw std::invalid_argument("goldreich_levin: tau must lie in (0, 1]");
  }
  const double mass_tau = tau * tau / 8.0;
  const double keep_threshold = tau * tau / 2.0;

  GoldreichLevinStats local;
  std::vector<SetIndex> buckets = {0};  // empty prefix
  for (int q = 0; q < n; ++q) {
    std::vector<SetIndex> next;
    const SetIndex decided = (SetIndex{1} << (q + 1)) - 1;
    for (const SetIndex prefix : buckets) {
      for (int bit = 0; bit < 2; ++bit) {
        const SetIndex child =
            prefix | (static_cast<SetIndex>(bit) << q);
        const SubsetPattern pattern(
            n, child, static_cast<SetIndex>(~child) & decided);
        const double answer =
            oracle.qstat(fourier_mass_observable(pattern), mass_tau);
        ++local.bucket_queries;
        if (2.0 * answer >= keep_threshold) next.push_back(child);
      }
    }
    buckets = std::move(next);
  }

  std::vector<SetIndex> survivors;
  for (const SetIndex s : buckets) {
    const double estimate =
        oracle.qstat(coefficient_observable(n, s), tau / 4.0);
    ++local.confirmation_queries;
    if (std::abs(estimate) >= 0.75 * tau) survivors.push_back(s);
  }
  std::sort(survivors.begin(), survivors.end());
  if (stats != nullptr) *stats = local;
  return survivors;
}

/// Learns an s-term DNF to target error epsilon: collect the heavy
/// coefficients at threshold tau = epsilon / (2 (2s + 1)), estimate each at
/// tolerance tau / 2, output the sign of the resulting sparse polynomial.
/// The error bound is validated empirically rather than guaranteed.
template <QstatOracleLike Oracle>
LearnerReport learn_dnf(Oracle& oracle, int n, int terms, double epsilon) {
  check_dimension(n);
  internal::require_clean_uniform_oracle(oracle, n, "learn_dnf");
  if (terms < 1) {
    throw std::invalid_argument("learn_dnf: need at least one term");
  }
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw std::invalid_argument("learn_dnf: epsilon must lie in (0, 1)");
  }
  const double tau = epsilon / (2.0 * (2.0 * terms + 1.0));

  GoldreichLevinStats gl_stats;
  const std::vector<SetIndex> heavy =
      goldreich_levin(oracle, n, tau, &gl_stats);

  std::vector<Hypothesis::Entry> entries;
  entries.reserve(heavy.size());
  for (const SetIndex s : heavy) {
    entries.push_back(Hypothesis::Entry{
        s, oracle.qstat(coefficient_observable(n, s), tau / 2.0)});
  }

  const std::size_t total = gl_stats.bucket_queries +
                            gl_stats.confirmation_queries + entries.size();
  return LearnerReport{
      Hypothesis(n, std::move(entries)), total, tau * tau / 8.0,
      {PhaseCount{"bucket_mass", gl_stats.bucket_queries},
       PhaseCount{"confirmation", gl_stats.confirmation_queries},
       PhaseCount{"coefficients", entries.size()}}};
}

}  // namespace qsq

#endif  // QSQ_LEARNERS_HPP_
