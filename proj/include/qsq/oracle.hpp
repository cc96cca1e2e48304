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

#ifndef QSQ_ORACLE_HPP_
#define QSQ_ORACLE_HPP_

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <concepts>
#include <cstdint>
#include <iomanip>
#include <limits>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "qsq/boolean_function.hpp"
#include "qsq/concepts.hpp"
#include "qsq/observable.hpp"
#include "qsq/rng.hpp"

namespace qsq {

/// The hidden learning target: a function c, an input distribution D and a
/// label-noise rate eta.  The (noiseless) quantum example state is
/// |psi> = sum_x sqrt(D(x)) |x, c(x)>; under noise each copy independently
/// flips every label with probability eta.  The target's spectrum is computed
/// once here and shared by every expectation below.
class ExampleSpec {
 public:
  ExampleSpec(BooleanFunction target, Distribution dist, double noise_rate)
      : target_(std::move(target)),
        dist_(std::move(dist)),
        noise_rate_(noise_rate),
        spectrum_(walsh_hadamard_transform(target_)) {
    if (target_.dimension() != dist_.dimension()) {
      throw std::invalid_argument("target and distribution dimensions differ");
    }
    if (!(noise_rate_ >= 0.0 && noise_rate_ < 0.5)) {
      throw std::invalid_argument("noise rate must lie in [0, 1/2)");
    }
  }

  static ExampleSpec noiseless_uniform(BooleanFunction target) {
    const int n = target.dimension();
    return ExampleSpec(std::move(target), Distribution::uniform(n), 0.0);
  }

  int dimension() const { return target_.dimension(); }
  const BooleanFunction& target() const { return target_; }
  const Distribution& dist() const { return dist_; }
  double noise_rate() const { return noise_rate_; }
  const FourierSpectrum& target_spectrum() const { return spectrum_; }

 private:
  BooleanFunction target_;
  Distribution dist_;
  double noise_rate_;
  FourierSpectrum spectrum_;
};

/// |psi> = sum_x sqrt(D(x)) |x, f(x)> in the |x, b> basis.
inline Eigen::VectorXcd state_vector(const BooleanFunction& f,
                                     const Distribution& d) {
  if (f.dimension() != d.dimension()) {
    throw std::invalid_argument("state_vector: dimension mismatch");
  }
  Eigen::VectorXcd psi =
      Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(2 * f.size()));
  for (std::uint32_t x = 0; x < f.size(); ++x) {
    psi(static_cast<Eigen::Index>(basis_index(x, f.label_bit(x)))) =
        std::sqrt(d.probability(x));
  }
  return psi;
}

/// Expectation of an explicit matrix on the noise-averaged example, i.e.
/// E_b <psi_b| A |psi_b> with every label flipped i.i.d. w.p. eta.  Exact
/// O(4^n) double sum over amplitude pairs; the diagonal terms see the SAME
/// flip on both sides and are averaged accordingly.
inline double noise_averaged_expectation(const ExampleSpec& spec,
                                         const Eigen::MatrixXcd& a) {
  const auto& f = spec.target();
  const auto& d = spec.dist();
  const double eta = spec.noise_rate();
  const std::size_t size = f.size();
  if (a.rows() != static_cast<Eigen::Index>(2 * size)) {
    throw std::invalid_argument("matrix does not act on (n+1) qubits");
  }
  std::vector<double> amp(size);
  for (std::uint32_t x = 0; x < size; ++x) {
    amp[x] = std::sqrt(d.probability(x));
  }
  std::complex<double> total = 0.0;
  for (std::uint32_t x = 0; x < size; ++x) {
    if (amp[x] == 0.0) continue;
    const int cx = f.label_bit(x);
    // Diagonal pair (x, x): one shared flip.
    const auto keep = static_cast<Eigen::Index>(basis_index(x, cx));
    const auto flip = static_cast<Eigen::Index>(basis_index(x, cx ^ 1));
    total += amp[x] * amp[x] *
             ((1.0 - eta) * a(keep, keep) + eta * a(flip, flip));
    // Off-diagonal pairs: independent flips on each side.
    for (std::uint32_t y = 0; y < size; ++y) {
      if (y == x || amp[y] == 0.0) continue;
      const int cy = f.label_bit(y);
      std::complex<double> cell = 0.0;
      for (int lx = 0; lx < 2; ++lx) {
        const double wx = (lx == cx) ? 1.0 - eta : eta;
        for (int ly = 0; ly < 2; ++ly) {
          const double wy = (ly == cy) ? 1.0 - eta : eta;
          cell += wx * wy *
                  a(static_cast<Eigen::Index>(basis_index(x, lx)),
                    static_cast<Eigen::Index>(basis_index(y, ly)));
        }
      }
      total += amp[x] * amp[y] * cell;
    }
  }
  return total.real();
}

/// Exact value the ideal oracle perturbs: the expectation of M on the
/// (noise-averaged) example state of `spec`.
///
/// Structured observables use closed forms valid for every n:
///  - diagonal:      sum_x D(x) [(1-eta) phi(x, c(x)) + eta phi(x, -c(x))]
///  - Fourier mass:  (1/2) [ (1-2 eta)^2 sum_{S in T} c^(S)^2
///                           + 4 eta (1-eta) |T| / 2^n ]     (uniform D only)
/// Dense observables contract the state directly (eta = 0) or fall back to
/// the exact noise-averaged double sum.
inline double exact_expectation(const ExampleSpec& spec, const Observable& m) {
  if (observable_dimension(m) != spec.dimension()) {
    throw std::invalid_argument("observable and example dimensions differ");
  }
  const double eta = spec.noise_rate();
  struct Eval {
    const ExampleSpec& spec;
    double eta;

    double operator()(const DiagonalObservable& obs) const {
      const auto& f = spec.target();
      const auto& d = spec.dist();
      double sum = 0.0;
      for (std::uint32_t x = 0; x < f.size(); ++x) {
        const int label = f(x);
        sum += d.probability(x) * ((1.0 - eta) * obs.value(x, label) +
                                   eta * obs.value(x, -label));
      }
      return sum;
    }

    double operator()(const FourierMassObservable& obs) const {
      if (!spec.dist().is_uniform()) {
        throw std::invalid_argument(
            "Fourier-mass observables require the uniform distribution");
      }
      const double mass = fourier_mass(spec.target_spectrum(), obs.pattern());
      if (eta == 0.0) return 0.5 * mass;
      const double keep = 1.0 - 2.0 * eta;
      const double fraction =
          static_cast<double>(obs.pattern().match_count()) /
          static_cast<double>(table_size(spec.dimension()));
      return 0.5 * (keep * keep * mass + 4.0 * eta * (1.0 - eta) * fraction);
    }

    double operator()(const DenseObservable& obs) const {
      if (eta == 0.0) {
        const Eigen::VectorXcd psi = state_vector(spec.target(), spec.dist());
        return (psi.adjoint() * obs.matrix() * psi)(0).real();
      }
      return noise_averaged_expectation(spec, obs.matrix());
    }
  };
  return std::visit(Eval{spec, eta}, m);
}

/// One eta-noisy classical draw of the whole truth table: every label
/// independently flipped with probability eta.
inline BooleanFunction noisy_example_draw(const ExampleSpec& spec,
                                          RandomStream& rng) {
  const auto& f = spec.target();
  const double eta = spec.noise_rate();
  std::vector<std::int8_t> values(f.values());
  if (eta > 0.0) {
    for (auto& v : values) {
      if (rng.bernoulli(eta)) v = static_cast<std::int8_t>(-v);
    }
  }
  return BooleanFunction(f.dimension(), std::move(values));
}

/// Draws single-copy measurement outcomes of observables on example states.
/// Outcomes always lie in [-1, 1] and are unbiased for exact_expectation.
class MeasurementSampler {
 public:
  MeasurementSampler(ExampleSpec spec, RandomStream rng)
      : spec_(std::move(spec)),
        rng_(std::move(rng)),
        cdf_(spec_.dist().cumulative()) {}

  const ExampleSpec& spec() const { return spec_; }

  double sample(const Observable& m) {
    if (observable_dimension(m) != spec_.dimension()) {
      throw std::invalid_argument("observable and example dimensions differ");
    }
    struct Draw {
      MeasurementSampler& self;

      double operator()(const DiagonalObservable& obs) const {
        const std::uint32_t x = sample_index(self.cdf_, self.rng_);
        int label = self.spec_.target()(x);
        if (self.spec_.noise_rate() > 0.0 &&
            self.rng_.bernoulli(self.spec_.noise_rate())) {
          label = -label;
        }
        return obs.value(x, label);
      }

      double operator()(const FourierMassObservable& obs) const {
        // Projector: the outcome is Bernoulli in {0, 1} with success equal to
        // the squared overlap of the (possibly noise-realized) state.
        if (!self.spec_.dist().is_uniform()) {
          throw std::invalid_argument(
              "Fourier-mass observables require the uniform distribution");
        }
        double p;
        if (self.spec_.noise_rate() == 0.0) {
          p = 0.5 * fourier_mass(self.spec_.target_spectrum(), obs.pattern());
        } else {
          const BooleanFunction realized =
              noisy_example_draw(self.spec_, self.rng_);
          p = 0.5 *
              fourier_mass(walsh_hadamard_transform(realized), obs.pattern());
        }
        return self.rng_.bernoulli(p) ? 1.0 : 0.0;
      }

      double operator()(const DenseObservable& obs) const {
        Eigen::VectorXcd psi;
        if (self.spec_.noise_rate() == 0.0) {
          psi = state_vector(self.spec_.target(), self.spec_.dist());
        } else {
          psi = state_vector(noisy_example_draw(self.spec_, self.rng_),
                             self.spec_.dist());
        }
        const Eigen::VectorXcd overlaps = obs.eigenvectors().adjoint() * psi;
        double u = self.rng_.uniform01();
        Eigen::Index chosen = overlaps.size() - 1;
        for (Eigen::Index k = 0; k < overlaps.size(); ++k) {
          u -= std::norm(overlaps(k));
          if (u < 0.0) {
            chosen = k;
            break;
          }
        }
        return obs.eigenvalues()(chosen);
      }
    };
    return std::visit(Draw{*this}, m);
  }

 private:
  ExampleSpec spec_;
  RandomStream rng_;
  std::vector<double> cdf_;
};

/// Convenience free function; prefer a persistent MeasurementSampler when
/// drawing many outcomes.  Consumes one word of the caller's stream to seed
/// the single-shot sampler.
inline double sample_measurement(const ExampleSpec& spec, const Observable& m,
                                 RandomStream& rng) {
  MeasurementSampler sampler(spec, RandomStream(rng.next_u64()));
  return sampler.sample(m);
}

// ---------------------------------------------------------------------------
// Tolerance models: how the oracle may corrupt the exact expectation.
// ---------------------------------------------------------------------------

/// Nearest point of the grid {2 tau k : k integer}; off by at most tau.
inline double grid_round(double value, double tau) {
  const double spacing = 2.0 * tau;
  return spacing * std::round(value / spacing);
}

/// Answers exactly.
struct ExactModel {};

/// Worst-case legal adversary: answers the nearest point of a grid of spacing
/// 2 * min(tau_model, tau_query), so every answer is off by up to the query's
/// tolerance but never more.  Leave `tau` unset to track each query.
struct GridAdversaryModel {
  std::optional<double> tau;
};

/// Answers the empirical mean of a fixed number of measured copies.
struct SamplingModel {
  std::size_t copies;
  std::uint64_t seed;
};

using ToleranceModel = std::variant<ExactModel, GridAdversaryModel,
                                    SamplingModel>;

/// One answered query, as recorded by the oracle's append-only ledger.
struct QueryRecord {
  std::size_t index;
  std::string kind;
  double tau;
  double alpha;
  double exact;
};

class QueryLog {
 public:
  void append(QueryRecord record) { records_.push_back(std::move(record)); }
  std::size_t size() const { return records_.size(); }
  const std::vector<QueryRecord>& records() const { return records_; }

  /// CSV export: query_index,kind,tau,alpha,exact,abs_error.
  void write_csv(std::ostream& out) const {
    out << "query_index,kind,tau,alpha,exact,abs_error\n";
    out << std::setprecision(17);
    for (const QueryRecord& r : records_) {
      out << r.index << ',' << r.kind << ',' << r.tau << ',' << r.alpha << ','
          << r.exact << ',' << std::abs(r.alpha - r.exact) << '\n';
    }
  }

 private:
  std::vector<QueryRecord> records_;
};

/// The statistical-query interface to a quantum example: qstat(M, tau)
/// returns some alpha with |alpha - <psi| M |psi>| <= tau, where the slack is
/// spent according to the configured tolerance model.  Every answer is
/// ledgered together with the exact value it approximates.
class QstatOracle {
 public:
  QstatOracle(ExampleSpec spec, ToleranceModel model)
      : spec_(std::move(spec)), model_(std::move(model)) {
    if (const auto* sampling = std::get_if<SamplingModel>(&model_)) {
      if (sampling->copies == 0) {
        throw std::invalid_argument("sampling model needs at least one copy");
      }
      sampler_.emplace(spec_, RandomStream::derive(sampling->seed,
                                                   "sampling_tolerance_model"));
    }
  }

  double qstat(const Observable& m, double tau) {
    if (!(tau > 0.0 && tau <= 1.0)) {
      throw std::invalid_argument("tolerance must lie in (0, 1]");
    }
    const double exact = exact_expectation(spec_, m);  // validates m vs spec
    const double alpha = perturb(m, exact, tau);
    log_.append(QueryRecord{log_.size(), observable_kind(m), tau, alpha,
                            exact});
    return alpha;
  }

  int dimension() const { return spec_.dimension(); }
  double noise_rate() const { return spec_.noise_rate(); }
  bool uniform_distribution() const { return spec_.dist().is_uniform(); }
  std::size_t query_count() const { return log_.size(); }
  const QueryLog& log() const { return log_; }
  const ExampleSpec& spec() const { return spec_; }
  const ToleranceModel& model() const { return model_; }

 private:
  double perturb(const Observable& m, double exact, double tau) {
    struct Apply {
      QstatOracle& self;
      const Observable& m;
      double exact;
      double tau;

      double operator()(const ExactModel&) const { return exact; }

      double operator()(const GridAdversaryModel& grid) const {
        const double effective =
            grid.tau.has_value() ? std::min(*grid.tau, tau) : tau;
        return grid_round(exact, effective);
      }

      double operator()(const SamplingModel& sampling) const {
        double sum = 0.0;
        for (std::size_t i = 0; i < sampling.copies; ++i) {
          sum += self.sampler_->sample(m);
        }
        return sum / static_cast<double>(sampling.copies);
      }
    };
    return std::visit(Apply{*this, m, exact, tau}, model_);
  }

  ExampleSpec spec_;
  ToleranceModel model_;
  QueryLog log_;
  std::optional<MeasurementSampler> sampler_;
};

/// Anything learners can query: the Qstat call plus the metadata they need to
/// check their preconditions.  Satisfied by QstatOracle and by the emulated,
/// adversarial, communication and private oracles elsewhere in the library.
template <typename T>
concept QstatOracleLike = requires(T oracle, const Observable& m, double tau) {
  { oracle.qstat(m, tau) } -> std::convertible_to<double>;
  { oracle.dimension() } -> std::convertible_to<int>;
  { oracle.noise_rate() } -> std::convertible_to<double>;
  { oracle.uniform_distribution() } -> std::convertible_to<bool>;
  { oracle.query_count() } -> std::convertible_to<std::size_t>;
};

}  // namespace qsq

#endif  // QSQ_ORACLE_HPP_
