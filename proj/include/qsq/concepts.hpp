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

#ifndef QSQ_CONCEPTS_HPP_
#define QSQ_CONCEPTS_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "qsq/boolean_function.hpp"
#include "qsq/rng.hpp"

namespace qsq {

/// Probability distribution over {0,1}^n, stored as a dense vector.
class Distribution {
 public:
  Distribution(int n, std::vector<double> probs)
      : n_(n), probs_(std::move(probs)) {
    check_dimension(n_);
    if (probs_.size() != table_size(n_)) {
      throw std::invalid_argument("distribution needs 2^n probabilities");
    }
    double sum = 0.0;
    for (double p : probs_) {
      if (p < 0.0) throw std::invalid_argument("negative probability");
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
      throw std::invalid_argument("probabilities sum to " +
                                  std::to_string(sum) + ", not 1");
    }
  }

  static Distribution uniform(int n) {
    check_dimension(n);
    return Distribution(
        n, std::vector<double>(table_size(n),
                               1.0 / static_cast<double>(table_size(n))));
  }

  int dimension() const { return n_; }
  double probability(std::uint32_t x) const { return probs_[x]; }
  const std::vector<double>& probabilities() const { return probs_; }

  bool is_uniform(double tol = 1e-12) const {
    const double u = 1.0 / static_cast<double>(probs_.size());
    return std::all_of(probs_.begin(), probs_.end(),
                       [&](double p) { return std::abs(p - u) <= tol; });
  }

  /// Cumulative sums for inverse-CDF sampling; last entry forced to 1.
  std::vector<double> cumulative() const {
    std::vector<double> cdf(probs_.size());
    std::partial_sum(probs_.begin(), probs_.end(), cdf.begin());
    cdf.back() = 1.0;
    return cdf;
  }

 private:
  int n_;
  std::vector<double> probs_;
};

/// Draws x ~ D using a precomputed cumulative table (see Distribution::cumulative).
inline std::uint32_t sample_index(const std::vector<double>& cdf,
                                  RandomStream& rng) {
  const double u = rng.uniform01();
  const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
  return static_cast<std::uint32_t>(std::min<std::ptrdiff_t>(
      it - cdf.begin(), static_cast<std::ptrdiff_t>(cdf.size()) - 1));
}

/// E_D[f g], the D-weighted correlation of two truth tables.
inline double correlation(const BooleanFunction& f, const BooleanFunction& g,
                          const Distribution& d) {
  if (f.dimension() != g.dimension() || f.dimension() != d.dimension()) {
    throw std::invalid_argument("correlation: dimension mismatch");
  }
  double sum = 0.0;
  for (std::uint32_t x = 0; x < f.size(); ++x) {
    sum += d.probability(x) * static_cast<double>(f(x) * g(x));
  }
  return sum;
}

// ---------------------------------------------------------------------------
// Concept classes: parities, juntas, small DNFs.
// ---------------------------------------------------------------------------

/// chi_s over n coordinates.
struct ParityConcept {
  int n;
  SetIndex s;

  ParityConcept(int n_in, SetIndex s_in) : n(n_in), s(s_in) {
    check_dimension(n);
    BooleanFunction::check_set(n, s);
  }

  int evaluate(std::uint32_t x) const { return parity_character(s, x); }
};

/// A k-junta given by its relevant coordinates (ascending) and the truth
/// table of the inner function on those k coordinates.
struct JuntaConcept {
  int n;
  std::vector<int> relevant;
  std::vector<std::int8_t> table;

  JuntaConcept(int n_in, std::vector<int> relevant_in,
               std::vector<std::int8_t> table_in)
      : n(n_in), relevant(std::move(relevant_in)), table(std::move(table_in)) {
    check_dimension(n);
    if (relevant.size() > static_cast<std::size_t>(n)) {
      throw std::invalid_argument("junta has more relevant coordinates than n");
    }
    for (std::size_t j = 0; j < relevant.size(); ++j) {
      if (relevant[j] < 0 || relevant[j] >= n) {
        throw std::invalid_argument("relevant coordinate out of range");
      }
      if (j > 0 && relevant[j] <= relevant[j - 1]) {
        throw std::invalid_argument("relevant coordinates must be ascending");
      }
    }
    if (table.size() != (std::size_t{1} << relevant.size())) {
      throw std::invalid_argument("junta table must have 2^k entries");
    }
    for (std::int8_t v : table) {
      if (v != -1 && v != +1) {
        throw std::invalid_argument("junta table entries must be -1 or +1");
      }
    }
  }

  int arity() const { return static_cast<int>(relevant.size()); }

  int evaluate(std::uint32_t x) const {
    std::uint32_t idx = 0;
    for (std::size_t j = 0; j < relevant.size(); ++j) {
      idx |= ((x >> relevant[j]) & 1u) << j;
    }
    return table[idx];
  }
};

/// One literal of a DNF term: the variable, possibly negated.
struct Literal {
  int var;
  bool negated;
};

/// Disjunction of conjunctive terms over n Boolean variables.  Logical TRUE
/// maps to -1 and FALSE to +1, consistent with the label convention
/// b -> (-1)^b; the empty DNF is the constant FALSE (+1).
struct DnfConcept {
  int n;
  std::vector<std::vector<Literal>> terms;

  DnfConcept(int n_in, std::vector<std::vector<Literal>> terms_in)
      : n(n_in), terms(std::move(terms_in)) {
    check_dimension(n);
    for (const auto& term : terms) {
      if (term.empty()) {
        throw std::invalid_argument("DNF term must contain a literal");
      }
      std::set<int> seen;
      for (const Literal& lit : term) {
        if (lit.var < 0 || lit.var >= n) {
          throw std::invalid_argument("DNF literal variable out of range");
        }
        if (!seen.insert(lit.var).second) {
          throw std::invalid_argument(
              "DNF term repeats a variable (or contains both polarities)");
        }
      }
    }
  }

  int evaluate(std::uint32_t x) const {
    for (const auto& term : terms) {
      bool satisfied = true;
      for (const Literal& lit : term) {
        const bool bit = ((x >> lit.var) & 1u) != 0;
        if (bit == lit.negated) {
          satisfied = false;
          break;
        }
      }
      if (satisfied) return -1;
    }
    return +1;
  }
};

using AnyConcept = std::variant<ParityConcept, JuntaConcept, DnfConcept>;

inline int evaluate(const AnyConcept& c, std::uint32_t x) {
  return std::visit([x](const auto& concrete) { return concrete.evaluate(x); },
                    c);
}

inline int concept_dimension(const AnyConcept& c) {
  return std::visit([](const auto& concrete) { return concrete.n; }, c);
}

template <typename ConcreteConcept>
BooleanFunction to_boolean_function(const ConcreteConcept& c) {
  return BooleanFunction::from_function(
      c.n, [&c](std::uint32_t x) { return c.evaluate(x); });
}

inline BooleanFunction to_boolean_function(const AnyConcept& c) {
  return std::visit(
      [](const auto& concrete) { return to_boolean_function(concrete); }, c);
}

// ---------------------------------------------------------------------------
// Hypotheses: sparse real polynomials thresholded by sign.
// ---------------------------------------------------------------------------

/// h(x) = sign(sum_S coeff_S chi_S(x)), with sign(0) = +1.
class Hypothesis {
 public:
  struct Entry {
    SetIndex set;
    double coeff;
  };

  Hypothesis(int n, std::vector<Entry> entries)
      : n_(n), entries_(std::move(entries)) {
    check_dimension(n_);
    std::set<SetIndex> seen;
    for (const Entry& e : entries_) {
      BooleanFunction::check_set(n_, e.set);
      if (!seen.insert(e.set).second) {
        throw std::invalid_argument("hypothesis repeats a character set");
      }
    }
  }

  /// The pure parity hypothesis chi_s.
  static Hypothesis parity(int n, SetIndex s) {
    return Hypothesis(n, {Entry{s, 1.0}});
  }

  int dimension() const { return n_; }
  const std::vector<Entry>& entries() const { return entries_; }

  double weighted_sum(std::uint32_t x) const {
    double sum = 0.0;
    for (const Entry& e : entries_) {
      sum += e.coeff * static_cast<double>(parity_character(e.set, x));
    }
    return sum;
  }

  int predict(std::uint32_t x) const { return sign_of(weighted_sum(x)); }

  BooleanFunction to_boolean_function() const {
    return BooleanFunction::from_function(
        n_, [this](std::uint32_t x) { return predict(x); });
  }

 private:
  int n_;
  std::vector<Entry> entries_;
};

/// Exact disagreement probability Pr_{x~D}[h(x) != truth(x)] by enumeration.
inline double error_rate(const Hypothesis& h, const BooleanFunction& truth,
                         const Distribution& d) {
  if (h.dimension() != truth.dimension() ||
      h.dimension() != d.dimension()) {
    throw std::invalid_argument("error_rate: dimension mismatch");
  }
  double err = 0.0;
  for (std::uint32_t x = 0; x < truth.size(); ++x) {
    if (h.predict(x) != truth(x)) err += d.probability(x);
  }
  return err;
}

inline double error_rate(const Hypothesis& h, const AnyConcept& c,
                         const Distribution& d) {
  return error_rate(h, to_boolean_function(c), d);
}

// ---------------------------------------------------------------------------
// Seeded random concept generation.
// ---------------------------------------------------------------------------

inline ParityConcept random_parity(int n, RandomStream& rng) {
  check_dimension(n);
  return ParityConcept(
      n, static_cast<SetIndex>(rng.uniform_below(table_size(n))));
}

/// Uniform k-subset of coordinates plus a uniform +-1 table on it.
inline JuntaConcept random_junta(int n, int k, RandomStream& rng) {
  check_dimension(n);
  if (k < 0 || k > n) throw std::invalid_argument("junta arity out of range");
  std::vector<int> pool(n);
  std::iota(pool.begin(), pool.end(), 0);
  std::vector<int> relevant;
  for (int j = 0; j < k; ++j) {
    const auto pick = static_cast<std::size_t>(rng.uniform_below(pool.size()));
    relevant.push_back(pool[pick]);
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(pick));
  }
  std::sort(relevant.begin(), relevant.end());
  std::vector<std::int8_t> table(std::size_t{1} << k);
  for (auto& v : table) v = rng.bernoulli(0.5) ? 1 : -1;
  return JuntaConcept(n, std::move(relevant), std::move(table));
}

/// Each variable joins a term independently with probability literal_prob
/// (uniform polarity); empty terms are resampled so every term is genuine.
inline DnfConcept random_dnf(int n, int num_terms, double literal_prob,
                             RandomStream& rng) {
  check_dimension(n);
  if (num_terms < 1) throw std::invalid_argument("need at least one DNF term");
  if (literal_prob <= 0.0 || literal_prob > 1.0) {
    throw std::invalid_argument("literal probability must be in (0, 1]");
  }
  std::vector<std::vector<Literal>> terms;
  terms.reserve(static_cast<std::size_t>(num_terms));
  for (int t = 0; t < num_terms; ++t) {
    std::vector<Literal> term;
    while (term.empty()) {
      for (int v = 0; v < n; ++v) {
        if (rng.bernoulli(literal_prob)) {
          term.push_back(Literal{v, rng.bernoulli(0.5)});
        }
      }
    }
    terms.push_back(std::move(term));
  }
  return DnfConcept(n, std::move(terms));
}

enum class ConceptKind { kParity, kJunta, kDnf };

/// Parameters for random_concept; fields are read per kind.
struct RandomConceptParams {
  int n = 1;
  int junta_arity = 0;          // kJunta
  int dnf_terms = 1;            // kDnf
  double literal_prob = 0.25;   // kDnf
};

inline AnyConcept random_concept(ConceptKind kind,
                                 const RandomConceptParams& params,
                                 std::uint64_t seed) {
  RandomStream rng = RandomStream::derive(seed, "random_concept");
  switch (kind) {
    case ConceptKind::kParity:
      return random_parity(params.n, rng);
    case ConceptKind::kJunta:
      return random_junta(params.n, params.junta_arity, rng);
    case ConceptKind::kDnf:
      return random_dnf(params.n, params.dnf_terms, params.literal_prob, rng);
  }
  throw std::logic_error("unreachable concept kind");
}

}  // namespace qsq

#endif  // QSQ_CONCEPTS_HPP_
