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

#ifndef QSQ_PRIVACY_HPP_
#define QSQ_PRIVACY_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include "qsq/concepts.hpp"
#include "qsq/observable.hpp"
#include "qsq/oracle.hpp"
#include "qsq/pac.hpp"
#include "qsq/rng.hpp"

namespace qsq {

// Differential privacy layer: Laplace noise, the noisy-average mechanism on
// [0,1] tuples, a statistical-query oracle whose answers are built from
// privately averaged measurement outcomes, and an empirical audit of the
// e^alpha closeness guarantee.

/// One draw from the two-sided exponential with density (rate/2) e^{-|x| rate}
/// via inverse CDF: u uniform in (-1/2, 1/2), x = -sign(u) ln(1 - 2|u|)/rate.
inline double laplace_sample(double rate, RandomStream& rng) {
  if (!(rate > 0.0)) {
    throw std::invalid_argument("Laplace rate must be positive");
  }
  const double u = rng.uniform01_open() - 0.5;  // open interval keeps log finite
  const double sign = (u > 0.0) ? 1.0 : (u < 0.0 ? -1.0 : 0.0);
  return -sign * std::log(1.0 - 2.0 * std::abs(u)) / rate;
}

/// Mean of a [0,1]-valued tuple plus Laplace noise of rate alpha * T, which
/// makes the release alpha-differentially private for tuples differing in a
/// single entry (the mean moves by at most 1/T, and the Laplace density
/// ratio at shift s is bounded by e^{rate * s}).  The output is deliberately
/// unclamped: this is the raw mechanism.
inline double private_average(const std::vector<double>& values, double alpha,
                              RandomStream& rng, double* noise_out = nullptr) {
  if (values.empty()) {
    throw std::invalid_argument("private average needs at least one value");
  }
  if (!(alpha > 0.0)) {
    throw std::invalid_argument("privacy parameter must be positive");
  }
  double sum = 0.0;
  for (double v : values) {
    if (!(v >= -1e-9 && v <= 1.0 + 1e-9)) {
      throw std::invalid_argument("private average expects values in [0, 1]");
    }
    sum += std::min(std::max(v, 0.0), 1.0);
  }
  const auto t = static_cast<double>(values.size());
  const double noise = laplace_sample(alpha * t, rng);
  if (noise_out != nullptr) *noise_out = noise;
  return sum / t + noise;
}

/// Closed-form certificate: the worst-case |log density ratio| between the
/// mechanism's output distributions on the two tuples.  For any output point,
/// | |x - m1| - |x - m2| | <= |m1 - m2|, so the ratio of the two shifted
/// Laplace densities is at most e^{rate |m1 - m2|}.  Neighboring tuples
/// (one entry changed within [0,1]) therefore certify at most alpha.
inline double private_average_log_ratio_bound(const std::vector<double>& a,
                                              const std::vector<double>& b,
                                              double alpha) {
  if (a.empty() || a.size() != b.size()) {
    throw std::invalid_argument("tuples must be nonempty and equally sized");
  }
  double sum_a = 0.0, sum_b = 0.0;
  for (double v : a) sum_a += v;
  for (double v : b) sum_b += v;
  const auto t = static_cast<double>(a.size());
  const double rate = alpha * t;
  return rate * std::abs(sum_a / t - sum_b / t);
}

/// Per-query measurement budget of the private learner:
/// Q = ceil(2 alpha^{-1} (1/tau^2 + 2/tau) ln(2 d / delta)), where d is the
/// number of queries the learner will make.  The 1/tau^2 part feeds the
/// concentration of the raw average, the 2/tau part the Laplace tail, and
/// the constant 2 covers the [-1,1] <-> [0,1] rescaling.
inline std::size_t private_query_sample_count(double tau, double alpha,
                                              std::size_t queries,
                                              double delta) {
  if (!(tau > 0.0 && tau <= 1.0)) {
    throw std::invalid_argument("tolerance must lie in (0, 1]");
  }
  if (!(alpha > 0.0)) {
    throw std::invalid_argument("privacy parameter must be positive");
  }
  if (queries == 0) {
    throw std::invalid_argument("query budget must be positive");
  }
  if (!(delta > 0.0 && delta < 1.0)) {
    throw std::invalid_argument("failure probability must lie in (0, 1)");
  }
  const double q = 2.0 / alpha * (1.0 / (tau * tau) + 2.0 / tau) *
                   std::log(2.0 * static_cast<double>(queries) / delta);
  return static_cast<std::size_t>(std::ceil(q));
}

/// Statistical-query oracle whose every answer is an alpha-private release:
/// Q fresh measurement outcomes are affine-mapped to [0,1], privately
/// averaged with Laplace rate alpha * Q, and mapped back.  Each query
/// consumes its own disjoint batch of copies, so privacy composes in
/// parallel across queries.  The answers satisfy the advertised tolerance
/// with probability >= 1 - delta over all planned queries together.
class PrivateQstatOracle {
 public:
  PrivateQstatOracle(ExampleSpec spec, double tau,
                     std::size_t planned_queries, double alpha, double delta,
                     std::uint64_t seed)
      : spec_(spec), tau_(tau), alpha_(alpha), delta_(delta),
        planned_queries_(planned_queries),
        samples_per_query_(
            private_query_sample_count(tau, alpha, planned_queries, delta)),
        sampler_(std::move(spec),
                 RandomStream::derive(seed, "private_qstat_samples")),
        noise_rng_(RandomStream::derive(seed, "private_qstat_noise")) {
    if (spec_.noise_rate() != 0.0) {
      throw std::invalid_argument(
          "the private oracle measures noiseless examples");
    }
  }

  double qstat(const Observable& m, double tau_query) {
    if (!(tau_query > 0.0 && tau_query <= 1.0)) {
      throw std::invalid_argument("tolerance must lie in (0, 1]");
    }
    if (tau_query < tau_ - 1e-12) {
      throw std::invalid_argument(
          "query tolerance is finer than the private oracle's budget");
    }
    std::vector<double> mapped(samples_per_query_);
    for (double& v : mapped) v = (sampler_.sample(m) + 1.0) / 2.0;
    double noise = 0.0;
    const double pa = private_average(mapped, alpha_, noise_rng_, &noise);
    const double answer = 2.0 * pa - 1.0;
    noise_trace_.push_back(noise);
    log_.append(QueryRecord{log_.size(), observable_kind(m), tau_query,
                            answer, exact_expectation(spec_, m)});
    return answer;
  }

  int dimension() const { return spec_.dimension(); }
  /// Zero: the oracle answers for the noiseless expectations.
  double noise_rate() const { return 0.0; }
  bool uniform_distribution() const { return spec_.dist().is_uniform(); }
  std::size_t query_count() const { return log_.size(); }

  double tolerance() const { return tau_; }
  double alpha() const { return alpha_; }
  double delta() const { return delta_; }
  std::size_t planned_queries() const { return planned_queries_; }
  std::size_t samples_per_query() const { return samples_per_query_; }
  std::size_t total_samples() const { return log_.size() * samples_per_query_; }
  /// One Laplace draw per answered query, in [0,1]-mean units.
  const std::vector<double>& noise_trace() const { return noise_trace_; }
  const QueryLog& log() const { return log_; }

 private:
  ExampleSpec spec_;
  double tau_;
  double alpha_;
  double delta_;
  std::size_t planned_queries_;
  std::size_t samples_per_query_;
  MeasurementSampler sampler_;
  RandomStream noise_rng_;
  std::vector<double> noise_trace_;
  QueryLog log_;
};

static_assert(QstatOracleLike<PrivateQstatOracle>);

/// Outcome of a private learning run.
struct PrivateLearnReport {
  Hypothesis hypothesis;
  std::size_t queries = 0;
  std::size_t samples_per_query = 0;
  std::size_t total_samples = 0;
  double alpha = 0.0;
  double delta = 0.0;
  std::vector<double> noise_trace;
};

/// Runs a learner against the private oracle.  The learner is any callable
/// on PrivateQstatOracle& returning a Hypothesis; planned_queries must cover
/// the queries it makes (it sizes the per-query budget's union bound).
template <typename Learner>
PrivateLearnReport private_pac_learn(const ExampleSpec& spec, double tau,
                                     std::size_t planned_queries, double alpha,
                                     double delta, Learner&& learner,
                                     std::uint64_t seed) {
  PrivateQstatOracle oracle(spec, tau, planned_queries, alpha, delta, seed);
  Hypothesis hypothesis = std::invoke(std::forward<Learner>(learner), oracle);
  PrivateLearnReport report{std::move(hypothesis),     oracle.query_count(),
                            oracle.samples_per_query(), oracle.total_samples(),
                            alpha,                      delta,
                            oracle.noise_trace()};
  if (report.noise_trace.size() != report.queries) {
    throw std::logic_error("expected exactly one noise draw per query");
  }
  return report;
}

/// One histogram cell of a privacy audit.
struct DpAuditBin {
  double lo = 0.0;
  double hi = 0.0;
  std::size_t count_p = 0;
  std::size_t count_q = 0;
  bool compared = false;
  double log_ratio = 0.0;  // |ln(p/q)| when compared
  double slack = 0.0;      // statistical allowance for this bin
};

/// Audit verdict and evidence.
struct DpAuditReport {
  double alpha = 0.0;
  std::size_t samples = 0;
  std::size_t compared_bins = 0;
  std::size_t skipped_bins = 0;
  double max_log_ratio = 0.0;
  bool pass = false;
  std::vector<DpAuditBin> bins;
};

/// Minimum hits (in both runs) for a bin to enter the ratio comparison.
inline constexpr std::size_t kDpAuditMinHits = 50;

/// Empirical check of the e^alpha guarantee: run both mechanisms `samples`
/// times, histogram outputs over [lo, hi] (outliers pool into the edge
/// bins), and compare per-bin frequencies.  A bin with enough mass on both
/// sides must have |log ratio| <= alpha + slack(counts); a bin with heavy
/// mass on one side and none on the other is an immediate violation.  Bins
/// with too few hits to compare are excluded and reported.
template <typename MechP, typename MechQ>
DpAuditReport dp_audit(MechP&& mechanism_p, MechQ&& mechanism_q, double alpha,
                       double lo, double hi, std::size_t bin_count,
                       std::size_t samples, std::uint64_t seed) {
  if (!(alpha > 0.0)) {
    throw std::invalid_argument("privacy parameter must be positive");
  }
  if (!(lo < hi) || bin_count == 0 || samples == 0) {
    throw std::invalid_argument("audit needs a range, bins, and samples");
  }

  RandomStream rng_p = RandomStream::derive(seed, "dp_audit_p");
  RandomStream rng_q = RandomStream::derive(seed, "dp_audit_q");
  const double width = (hi - lo) / static_cast<double>(bin_count);
  const auto bin_of = [&](double x) {
    auto b = static_cast<std::ptrdiff_t>(std::floor((x - lo) / width));
    b = std::clamp<std::ptrdiff_t>(b, 0,
                                   static_cast<std::ptrdiff_t>(bin_count) - 1);
    return static_cast<std::size_t>(b);
  };

  std::vector<DpAuditBin> bins(bin_count);
  for (std::size_t i = 0; i < bin_count; ++i) {
    bins[i].lo = lo + width * static_cast<double>(i);
    bins[i].hi = bins[i].lo + width;
  }
  for (std::size_t s = 0; s < samples; ++s) {
    ++bins[bin_of(std::invoke(mechanism_p, rng_p))].count_p;
    ++bins[bin_of(std::invoke(mechanism_q, rng_q))].count_q;
  }

  DpAuditReport report;
  report.alpha = alpha;
  report.samples = samples;
  report.pass = true;
  for (DpAuditBin& bin : bins) {
    const std::size_t big = std::max(bin.count_p, bin.count_q);
    const std::size_t small = std::min(bin.count_p, bin.count_q);
    if (big < kDpAuditMinHits) continue;  // negligible mass everywhere
    if (small == 0) {
      // Heavy on one side, absent on the other: unbounded empirical ratio.
      bin.compared = true;
      bin.log_ratio = std::numeric_limits<double>::infinity();
      report.pass = false;
      ++report.compared_bins;
      report.max_log_ratio = bin.log_ratio;
      continue;
    }
    if (small < kDpAuditMinHits) {
      ++report.skipped_bins;  // too thin to compare reliably
      continue;
    }
    bin.compared = true;
    bin.log_ratio = std::abs(std::log(static_cast<double>(bin.count_p) /
                                      static_cast<double>(bin.count_q)));
    bin.slack = 3.0 * std::sqrt(1.0 / static_cast<double>(bin.count_p) +
                                1.0 / static_cast<double>(bin.count_q));
    ++report.compared_bins;
    report.max_log_ratio = std::max(report.max_log_ratio, bin.log_ratio);
    if (bin.log_ratio > alpha + bin.slack) report.pass = false;
  }
  report.bins = std::move(bins);
  return report;
}

}  // namespace qsq

#endif  // QSQ_PRIVACY_HPP_
