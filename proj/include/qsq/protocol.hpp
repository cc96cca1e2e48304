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

#ifndef QSQ_PROTOCOL_HPP_
#define QSQ_PROTOCOL_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qsq/boolean_function.hpp"
#include "qsq/concepts.hpp"
#include "qsq/observable.hpp"
#include "qsq/oracle.hpp"
#include "qsq/rng.hpp"
#include "qsq/sqdim.hpp"

namespace qsq {

// One-way communication out of statistical queries: Alice, who holds the
// concept, answers each query with a fixed-width code for a grid-quantized
// exact expectation; Bob replays the learner against the decoded answers and
// predicts the concept's value on his input.  The message cost is the query
// count times the per-answer code width.

/// Number of grid levels for tolerance tau: ceil(1/tau) + 1 points spaced
/// 2*tau apart starting at -1.
inline std::size_t quantizer_levels(double tau) {
  if (!(tau > 0.0 && tau <= 1.0)) {
    throw std::invalid_argument("quantizer tolerance must lie in (0, 1]");
  }
  return static_cast<std::size_t>(std::ceil(1.0 / tau)) + 1;
}

/// Bits per transmitted answer: fixed-width code over the level alphabet.
inline std::size_t quantizer_code_width(double tau) {
  const std::size_t levels = quantizer_levels(tau);
  std::size_t width = 0;
  while ((std::size_t{1} << width) < levels) ++width;
  return width;
}

/// A quantized answer: the transmitted level index and its decoded value.
struct QuantizedValue {
  std::uint32_t code = 0;
  double decoded = 0.0;
};

/// Nearest grid level to the value; |decoded - value| <= tau for values in
/// [-1, 1].  Deterministic, so transcripts are reproducible.
inline QuantizedValue quantize(double value, double tau) {
  const std::size_t levels = quantizer_levels(tau);
  const double raw = (value + 1.0) / (2.0 * tau);
  const auto top = static_cast<double>(levels - 1);
  const double snapped = std::min(std::max(std::round(raw), 0.0), top);
  const auto code = static_cast<std::uint32_t>(snapped);
  return QuantizedValue{code, -1.0 + 2.0 * tau * snapped};
}

/// One row of Alice's transcript.
struct AliceAnswer {
  std::size_t index = 0;
  std::string kind;
  double tau_query = 0.0;
  double exact = 0.0;
  std::uint32_t code = 0;
  double decoded = 0.0;
};

/// Alice's side of the protocol: a Qstat oracle whose answers are grid
/// quantizations of the exact expectations for her concept, every one of
/// which costs quantizer_code_width(tau) bits to send.  Queries finer than
/// her quantization tolerance cannot be honored and are rejected.
class AliceOracle {
 public:
  AliceOracle(ExampleSpec spec, double tau)
      : spec_(std::move(spec)), tau_(tau),
        code_width_(quantizer_code_width(tau)) {
    if (spec_.noise_rate() != 0.0) {
      throw std::invalid_argument("Alice answers for a noiseless concept");
    }
  }

  double qstat(const Observable& m, double tau_query) {
    if (!(tau_query > 0.0 && tau_query <= 1.0)) {
      throw std::invalid_argument("tolerance must lie in (0, 1]");
    }
    if (tau_query < tau_ - 1e-12) {
      throw std::invalid_argument(
          "Alice cannot honor tolerances below her quantization grid");
    }
    const double exact = exact_expectation(spec_, m);
    const QuantizedValue q = quantize(exact, tau_);
    if (std::abs(q.decoded - exact) > tau_ + 1e-12) {
      throw std::logic_error("quantized answer left the tolerance band");
    }
    transcript_.push_back(AliceAnswer{transcript_.size(), observable_kind(m),
                                      tau_query, exact, q.code, q.decoded});
    bits_sent_ += code_width_;
    return q.decoded;
  }

  int dimension() const { return spec_.dimension(); }
  double noise_rate() const { return 0.0; }
  bool uniform_distribution() const { return spec_.dist().is_uniform(); }
  std::size_t query_count() const { return transcript_.size(); }

  double tolerance() const { return tau_; }
  std::size_t code_width() const { return code_width_; }
  std::size_t bits_sent() const { return bits_sent_; }
  const std::vector<AliceAnswer>& transcript() const { return transcript_; }

 private:
  ExampleSpec spec_;
  double tau_;
  std::size_t code_width_;
  std::size_t bits_sent_ = 0;
  std::vector<AliceAnswer> transcript_;
};

static_assert(QstatOracleLike<AliceOracle>);

/// Aggregate outcome of the simulated protocol.
struct ProtocolResult {
  std::size_t bits_per_execution = 0;  // worst case over trials
  std::size_t queries = 0;             // worst case over trials
  double success = 0.0;
  std::size_t trials = 0;
  double gamma_target = 0.0;
  bool every_answer_legal = true;
};

/// Runs the protocol: per trial, a concept index is drawn from mu1 and Bob's
/// input from mu2; the learner (a callable on AliceOracle& returning a
/// Hypothesis) is replayed against Alice's quantized answers, and the trial
/// succeeds when the hypothesis matches the concept on Bob's input.  Reports
/// worst-case bits/queries and the empirical success rate against the
/// 1/2 + gamma target.
template <typename Learner>
ProtocolResult run_protocol(const ConceptClassTable& cls,
                            const std::vector<double>& mu1,
                            const Distribution& mu2, double tau,
                            double gamma_target, Learner&& learner,
                            std::size_t trials, std::uint64_t seed) {
  if (mu1.size() != cls.size()) {
    throw std::invalid_argument(
        "concept-index distribution must match the class size");
  }
  double total = 0.0;
  for (double p : mu1) {
    if (p < 0.0) {
      throw std::invalid_argument("concept-index weights must be nonnegative");
    }
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw std::invalid_argument("concept-index weights must sum to one");
  }
  if (cls.dimension() != mu2.dimension()) {
    throw std::invalid_argument(
        "input distribution dimension must match the class");
  }
  if (trials == 0) throw std::invalid_argument("trial count must be positive");

  std::vector<double> index_cdf(mu1.size());
  std::partial_sum(mu1.begin(), mu1.end(), index_cdf.begin());
  index_cdf.back() = 1.0;
  const std::vector<double> input_cdf = mu2.cumulative();

  ProtocolResult result;
  result.trials = trials;
  result.gamma_target = gamma_target;
  std::size_t successes = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    RandomStream rng = RandomStream::derive(seed, "protocol_trial", t);
    const std::uint32_t which = sample_index(index_cdf, rng);
    const SetIndex x = sample_index(input_cdf, rng);
    const BooleanFunction& c = cls[which];

    AliceOracle alice(ExampleSpec(c, mu2, 0.0), tau);
    const Hypothesis h = std::invoke(learner, alice);
    if (h.predict(x) == c(x)) ++successes;

    result.bits_per_execution =
        std::max(result.bits_per_execution, alice.bits_sent());
    result.queries = std::max(result.queries, alice.query_count());
    for (const AliceAnswer& a : alice.transcript()) {
      if (std::abs(a.decoded - a.exact) > tau + 1e-12) {
        result.every_answer_legal = false;
      }
    }
  }
  result.success =
      static_cast<double>(successes) / static_cast<double>(trials);
  return result;
}

}  // namespace qsq

#endif  // QSQ_PROTOCOL_HPP_
