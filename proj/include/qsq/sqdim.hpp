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

#ifndef QSQ_SQDIM_HPP_
#define QSQ_SQDIM_HPP_

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "qsq/boolean_function.hpp"
#include "qsq/concepts.hpp"
#include "qsq/observable.hpp"
#include "qsq/oracle.hpp"

namespace qsq {

// Weak statistical query dimension and the covering-cell adversary built on
// it.  The dimension is the largest d admitting d concepts with pairwise
// |correlation| <= 1/d; the adversary exploits such near-orthogonal families
// by answering every tolerance-2tau query with the center of the densest
// width-2tau cell, keeping at least a 1/ceil(1/tau) fraction of candidates
// alive per query.

/// A finite list of same-dimension concepts, optionally labeled.
class ConceptClassTable {
 public:
  explicit ConceptClassTable(std::vector<BooleanFunction> concepts,
                             std::vector<std::string> labels = {})
      : concepts_(std::move(concepts)), labels_(std::move(labels)) {
    if (concepts_.empty()) {
      throw std::invalid_argument("concept class must be nonempty");
    }
    for (const BooleanFunction& c : concepts_) {
      if (c.dimension() != concepts_.front().dimension()) {
        throw std::invalid_argument(
            "concept class must have uniform dimension");
      }
    }
    if (!labels_.empty() && labels_.size() != concepts_.size()) {
      throw std::invalid_argument(
          "labels, when given, must match the concept count");
    }
  }

  /// All 2^n parity characters chi_S, labeled by the set mask.
  static ConceptClassTable parities(int n) {
    check_dimension(n);
    std::vector<BooleanFunction> concepts;
    std::vector<std::string> labels;
    concepts.reserve(table_size(n));
    for (SetIndex s = 0; s < table_size(n); ++s) {
      concepts.push_back(BooleanFunction::parity(n, s));
      labels.push_back("chi_" + std::to_string(s));
    }
    return ConceptClassTable(std::move(concepts), std::move(labels));
  }

  int dimension() const { return concepts_.front().dimension(); }
  std::size_t size() const { return concepts_.size(); }
  const BooleanFunction& operator[](std::size_t i) const {
    return concepts_.at(i);
  }
  const std::vector<BooleanFunction>& concepts() const { return concepts_; }
  /// Empty when the class is unlabeled.
  const std::vector<std::string>& labels() const { return labels_; }
  std::string label_of(std::size_t i) const {
    return labels_.empty() ? ("c" + std::to_string(i)) : labels_.at(i);
  }

 private:
  std::vector<BooleanFunction> concepts_;
  std::vector<std::string> labels_;
};

/// Outcome of a dimension computation.  When exact is false the value is a
/// certified lower bound (a witness family of that size was found).
struct SqdimResult {
  std::size_t dimension = 0;
  bool exact = false;
};

/// Largest class size handled by the exact subset search.
inline constexpr std::size_t kExactSqdimLimit = 64;

namespace internal {

/// True when some clique of size >= want exists in the graph on [0, m) whose
/// adjacency rows are the given bitmasks.  Plain branch and bound: every
/// vertex is either taken (shrinking candidates to its neighborhood) or
/// dropped, pruning when even taking everything left cannot reach the goal.
inline bool has_clique(const std::vector<std::uint64_t>& adjacency,
                       std::uint64_t candidates, std::size_t have,
                       std::size_t want) {
  while (true) {
    if (have >= want) return true;
    if (have + static_cast<std::size_t>(std::popcount(candidates)) < want) {
      return false;
    }
    const int v = std::countr_zero(candidates);
    candidates &= candidates - 1;  // drop v from the candidate pool
    if (has_clique(adjacency, candidates & adjacency[v], have + 1, want)) {
      return true;
    }
    // else: continue with v excluded (loop)
  }
}

}  // namespace internal

/// WeakSQDIM of the class under D: the largest d for which d concepts exist
/// with pairwise |E_D[c_i c_j]| <= 1/d.  Exact (descending subset search) up
/// to kExactSqdimLimit concepts; beyond that a greedy witness search returns
/// a lower bound with exact = false.
inline SqdimResult weak_sqdim(const ConceptClassTable& cls,
                              const Distribution& d) {
  const std::size_t m = cls.size();
  if (cls.dimension() != d.dimension()) {
    throw std::invalid_argument(
        "distribution dimension must match the concept class");
  }
  constexpr double kEps = 1e-12;  // absorbs rounding on exact-boundary pairs

  if (m <= kExactSqdimLimit) {
    // Pairwise correlations, computed once; cheap at this size.
    std::vector<std::vector<double>> corr(m, std::vector<double>(m, 1.0));
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = i + 1; j < m; ++j) {
        corr[i][j] = corr[j][i] = correlation(cls[i], cls[j], d);
      }
    }
    for (std::size_t want = m; want >= 2; --want) {
      const double threshold = 1.0 / static_cast<double>(want) + kEps;
      std::vector<std::uint64_t> adjacency(m, 0);
      for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
          if (i != j && std::abs(corr[i][j]) <= threshold) {
            adjacency[i] |= std::uint64_t{1} << j;
          }
        }
      }
      const std::uint64_t all =
          m == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << m) - 1;
      if (internal::has_clique(adjacency, all, 0, want)) {
        return SqdimResult{want, true};
      }
    }
    return SqdimResult{1, true};  // any single concept is a witness
  }

  // Greedy witness search for large classes; correlations are computed on
  // demand and memoized, since only pairs touching greedily kept concepts
  // are ever needed.
  std::unordered_map<std::uint64_t, double> corr_memo;
  const auto corr_of = [&](std::size_t i, std::size_t j) {
    const std::uint64_t key =
        (static_cast<std::uint64_t>(std::min(i, j)) << 32) | std::max(i, j);
    const auto it = corr_memo.find(key);
    if (it != corr_memo.end()) return it->second;
    const double value = correlation(cls[i], cls[j], d);
    corr_memo.emplace(key, value);
    return value;
  };

  // For a target d, scan concepts in order and keep those compatible with
  // everything kept so far at threshold 1/d.  Success certifies d as a lower
  // bound; feasibility (a witness existing) is monotone downward, so a
  // binary search over targets finds the largest greedy-reachable one.
  const auto greedy_reaches = [&](std::size_t want) {
    const double threshold = 1.0 / static_cast<double>(want) + kEps;
    std::vector<std::size_t> kept;
    for (std::size_t i = 0; i < m && kept.size() < want; ++i) {
      bool ok = true;
      for (std::size_t j : kept) {
        if (std::abs(corr_of(i, j)) > threshold) {
          ok = false;
          break;
        }
      }
      if (ok) kept.push_back(i);
    }
    return kept.size() >= want;
  };

  if (greedy_reaches(m)) return SqdimResult{m, false};
  std::size_t lo = 1, hi = m;  // greedy_reaches(lo) true, (hi) false
  while (hi - lo > 1) {
    const std::size_t mid = lo + (hi - lo) / 2;
    (greedy_reaches(mid) ? lo : hi) = mid;
  }
  return SqdimResult{lo, false};
}

/// One adversary answer: which query was asked, what was said, and which
/// candidates were alive before/after (with their exact values, for audits).
struct AdversaryStep {
  std::size_t index = 0;
  std::string kind;
  double tau_query = 0.0;
  double answer = 0.0;
  std::vector<std::size_t> live_before;
  std::vector<double> values_before;  // aligned with live_before
  std::vector<std::size_t> live_after;
};

/// Answers Qstat queries so as to keep as many candidate concepts viable as
/// possible.  [-1, 1] is covered by ceil(1/tau) cells of width 2*tau; each
/// query is answered with the center of the cell holding the most live
/// candidates (leftmost on ties), which is a legal answer for every candidate
/// it retains.  Only queries of tolerance >= 2*tau are accepted: that is the
/// regime in which the cell center is within tolerance for the whole cell.
class AdversaryOracle {
 public:
  AdversaryOracle(ConceptClassTable cls, Distribution dist, double tau)
      : cls_(std::move(cls)), tau_(tau) {
    if (!(tau_ > 0.0 && tau_ <= 0.5)) {
      throw std::invalid_argument("adversary tolerance must lie in (0, 1/2]");
    }
    if (cls_.dimension() != dist.dimension()) {
      throw std::invalid_argument(
          "distribution dimension must match the concept class");
    }
    cells_ = static_cast<std::size_t>(std::ceil(1.0 / tau_));
    specs_.reserve(cls_.size());
    for (const BooleanFunction& c : cls_.concepts()) {
      specs_.emplace_back(c, dist, 0.0);
    }
    live_.resize(cls_.size());
    for (std::size_t i = 0; i < live_.size(); ++i) live_[i] = i;
  }

  double qstat(const Observable& m, double tau_query) {
    if (!(tau_query > 0.0 && tau_query <= 1.0)) {
      throw std::invalid_argument("tolerance must lie in (0, 1]");
    }
    if (tau_query < 2.0 * tau_ - 1e-12) {
      throw std::invalid_argument(
          "adversary accepts only queries of tolerance >= 2*tau");
    }
    if (observable_dimension(m) != dimension()) {
      throw std::invalid_argument("observable dimension mismatch");
    }

    AdversaryStep step;
    step.index = transcript_.size();
    step.kind = observable_kind(m);
    step.tau_query = tau_query;
    step.live_before = live_;
    step.values_before.reserve(live_.size());
    for (std::size_t i : live_) {
      step.values_before.push_back(exact_expectation(specs_[i], m));
    }

    // Densest width-2tau cell, leftmost on ties.
    std::vector<std::size_t> counts(cells_, 0);
    for (double v : step.values_before) ++counts[cell_of(v)];
    const std::size_t chosen = static_cast<std::size_t>(
        std::max_element(counts.begin(), counts.end()) - counts.begin());
    step.answer = -1.0 + 2.0 * tau_ * static_cast<double>(chosen) + tau_;

    std::vector<std::size_t> kept;
    for (std::size_t i = 0; i < live_.size(); ++i) {
      if (cell_of(step.values_before[i]) == chosen) {
        kept.push_back(live_[i]);
        // Legality for every retained candidate, checked, not assumed.
        if (std::abs(step.answer - step.values_before[i]) >
            tau_query + 1e-12) {
          throw std::logic_error("adversary produced an illegal answer");
        }
      }
    }
    // Pigeonhole retention over ceil(1/tau) cells.
    const std::size_t floor_share =
        (live_.size() + cells_ - 1) / cells_;  // ceil(live/cells)
    if (kept.size() < floor_share) {
      throw std::logic_error("adversary retention fell below the covering "
                             "bound");
    }

    live_ = kept;
    step.live_after = live_;
    transcript_.push_back(std::move(step));
    return transcript_.back().answer;
  }

  int dimension() const { return cls_.dimension(); }
  double noise_rate() const { return 0.0; }
  bool uniform_distribution() const {
    return specs_.front().dist().is_uniform();
  }
  std::size_t query_count() const { return transcript_.size(); }

  double tolerance() const { return tau_; }
  std::size_t cell_count() const { return cells_; }
  const std::vector<std::size_t>& live() const { return live_; }
  const std::vector<AdversaryStep>& transcript() const { return transcript_; }
  const ConceptClassTable& concept_class() const { return cls_; }
  const Distribution& dist() const { return specs_.front().dist(); }

 private:
  std::size_t cell_of(double value) const {
    const double shifted = (value + 1.0) / (2.0 * tau_);
    auto cell = static_cast<std::ptrdiff_t>(std::floor(shifted));
    cell = std::clamp<std::ptrdiff_t>(cell, 0,
                                      static_cast<std::ptrdiff_t>(cells_) - 1);
    return static_cast<std::size_t>(cell);
  }

  ConceptClassTable cls_;
  double tau_;
  std::size_t cells_ = 0;
  std::vector<ExampleSpec> specs_;
  std::vector<std::size_t> live_;
  std::vector<AdversaryStep> transcript_;
};

static_assert(QstatOracleLike<AdversaryOracle>);

/// Outcome of one learner-vs-adversary game.
struct GameReport {
  std::size_t queries = 0;
  std::size_t surviving = 0;
  std::vector<std::size_t> survivors;
  double worst_error = 0.0;
  std::size_t worst_index = 0;
  bool met_target = false;
  /// log_{1/(2 tau)} |class|: below this many queries at least two candidates
  /// survive for near-orthogonal classes (0 when the base degenerates).
  double information_bound_queries = 0.0;
  bool information_bound_respected = false;
  std::vector<AdversaryStep> transcript;
};

/// Plays a learner against the covering adversary; afterwards the adversary
/// picks the surviving concept on which the hypothesis errs the most.  The
/// learner is any callable taking the oracle and returning a Hypothesis.
template <typename Learner>
GameReport run_lower_bound_game(Learner&& learner,
                                const ConceptClassTable& cls,
                                const Distribution& dist, double tau,
                                double error_target) {
  AdversaryOracle oracle(cls, dist, tau);
  const Hypothesis h = std::invoke(std::forward<Learner>(learner), oracle);

  GameReport report;
  report.queries = oracle.query_count();
  report.survivors = oracle.live();
  report.surviving = report.survivors.size();
  report.worst_error = -1.0;
  for (std::size_t i : report.survivors) {
    const double err = error_rate(h, cls[i], dist);
    if (err > report.worst_error) {
      report.worst_error = err;
      report.worst_index = i;
    }
  }
  report.met_target = report.worst_error <= error_target;

  const double base = 1.0 / (2.0 * tau);
  report.information_bound_queries =
      base > 1.0 ? std::log(static_cast<double>(cls.size())) / std::log(base)
                 : 0.0;
  report.information_bound_respected =
      static_cast<double>(report.queries) >= report.information_bound_queries ||
      report.surviving >= 2;
  report.transcript = oracle.transcript();
  return report;
}

}  // namespace qsq

#endif  // QSQ_SQDIM_HPP_
