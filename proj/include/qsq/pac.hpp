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

#ifndef QSQ_PAC_HPP_
#define QSQ_PAC_HPP_

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>

#include "qsq/observable.hpp"
#include "qsq/oracle.hpp"
#include "qsq/rng.hpp"

namespace qsq {

// Statistical queries out of measured copies: answering one query within tau
// with failure probability delta_share costs T copies by Hoeffding (outcomes
// live in [-1, 1], so the exponent carries the constant 2).  With label noise
// eta the empirical mean concentrates around the noisy expectation, which
// itself sits within sqrt(eta) of the noiseless one, so the copy count is
// inflated to make the leftover margin tau - sqrt(eta) do the work.

/// T = ceil(2 ln(2 / delta_share) / tau^2).
inline std::size_t qstat_copy_count(double tau, double delta_share) {
  if (!(tau > 0.0 && tau <= 1.0)) {
    throw std::invalid_argument("copy count: tau must lie in (0, 1]");
  }
  if (!(delta_share > 0.0 && delta_share < 1.0)) {
    throw std::invalid_argument("copy count: delta must lie in (0, 1)");
  }
  return static_cast<std::size_t>(
      std::ceil(2.0 * std::log(2.0 / delta_share) / (tau * tau)));
}

/// T = ceil(2 ln(2 / delta_share) / (tau - sqrt(eta))^2); needs sqrt(eta) <
/// tau so a positive margin remains after the noise bias.
inline std::size_t noisy_qstat_copy_count(double tau, double eta,
                                          double delta_share) {
  if (!(eta >= 0.0 && eta < 0.5)) {
    throw std::invalid_argument("copy count: eta must lie in [0, 1/2)");
  }
  const double margin = tau - std::sqrt(eta);
  if (!(margin > 0.0)) {
    throw std::invalid_argument(
        "copy count: need sqrt(eta) < tau for a usable margin");
  }
  return qstat_copy_count(margin, delta_share);
}

/// Result of answering one statistical query from measured copies.
struct QstatSimulation {
  double alpha = 0.0;
  std::size_t copies = 0;
};

/// Mean of T measured outcomes on a caller-provided sampler.
inline QstatSimulation simulate_from_sampler(MeasurementSampler& sampler,
                                             const Observable& m,
                                             std::size_t copies) {
  double sum = 0.0;
  for (std::size_t i = 0; i < copies; ++i) sum += sampler.sample(m);
  return QstatSimulation{sum / static_cast<double>(copies), copies};
}

/// Simulates one noiseless Qstat answer: T = qstat_copy_count outcomes,
/// averaged.  |alpha - exact| <= tau except with probability delta_share.
inline QstatSimulation simulate_qstat(const ExampleSpec& spec,
                                      const Observable& m, double tau,
                                      double delta_share, std::uint64_t seed) {
  if (spec.noise_rate() != 0.0) {
    throw std::invalid_argument(
        "simulate_qstat expects a noiseless example; use "
        "simulate_noisy_qstat");
  }
  MeasurementSampler sampler(spec, RandomStream::derive(seed, "simulate_qstat"));
  return simulate_from_sampler(sampler, m, qstat_copy_count(tau, delta_share));
}

/// Simulates one Qstat answer from eta-noisy copies.  The returned alpha is
/// within tau of the NOISELESS expectation except with probability
/// delta_share, provided sqrt(eta) < tau.
inline QstatSimulation simulate_noisy_qstat(const ExampleSpec& spec,
                                            const Observable& m, double tau,
                                            double delta_share,
                                            std::uint64_t seed) {
  MeasurementSampler sampler(
      spec, RandomStream::derive(seed, "simulate_noisy_qstat"));
  return simulate_from_sampler(
      sampler, m,
      noisy_qstat_copy_count(tau, spec.noise_rate(), delta_share));
}

/// Presents a legal noiseless Qstat oracle backed by measured (possibly
/// noisy) copies: each query is answered by an empirical mean sized so that
/// |alpha - noiseless expectation| <= tau_query except with probability
/// delta_share.  Because the contract it offers is the noiseless one, its
/// advertised noise rate is zero and the standard learners accept it
/// unchanged; the ledger records the noiseless exact values.
class EmulatedQstatOracle {
 public:
  EmulatedQstatOracle(ExampleSpec spec, double delta_share, std::uint64_t seed)
      : underlying_noise_(spec.noise_rate()),
        noiseless_(ExampleSpec(spec.target(), spec.dist(), 0.0)),
        sampler_(std::move(spec),
                 RandomStream::derive(seed, "emulated_qstat_oracle")),
        delta_share_(delta_share) {
    if (!(delta_share_ > 0.0 && delta_share_ < 1.0)) {
      throw std::invalid_argument("delta share must lie in (0, 1)");
    }
  }

  double qstat(const Observable& m, double tau) {
    if (!(tau > 0.0 && tau <= 1.0)) {
      throw std::invalid_argument("tolerance must lie in (0, 1]");
    }
    const std::size_t copies =
        noisy_qstat_copy_count(tau, underlying_noise_, delta_share_);
    const QstatSimulation sim = simulate_from_sampler(sampler_, m, copies);
    log_.append(QueryRecord{log_.size(), observable_kind(m), tau, sim.alpha,
                            exact_expectation(noiseless_, m)});
    total_copies_ += copies;
    return sim.alpha;
  }

  int dimension() const { return noiseless_.dimension(); }
  /// Zero: the interface this oracle honors is the noiseless one.
  double noise_rate() const { return 0.0; }
  double underlying_noise_rate() const { return underlying_noise_; }
  bool uniform_distribution() const { return noiseless_.dist().is_uniform(); }
  std::size_t query_count() const { return log_.size(); }
  std::size_t total_copies_used() const { return total_copies_; }
  const QueryLog& log() const { return log_; }

 private:
  double underlying_noise_;
  ExampleSpec noiseless_;
  MeasurementSampler sampler_;
  double delta_share_;
  QueryLog log_;
  std::size_t total_copies_ = 0;
};

static_assert(QstatOracleLike<EmulatedQstatOracle>);
static_assert(QstatOracleLike<QstatOracle>);

}  // namespace qsq

#endif  // QSQ_PAC_HPP_
