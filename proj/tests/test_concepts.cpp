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

#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <cstdint>
#include <set>
#include <vector>

#include "qsq/boolean_function.hpp"
#include "qsq/concepts.hpp"
#include "qsq/rng.hpp"
#include "support/test_oracles.hpp"

namespace qsq {
namespace {

using Catch::Approx;

TEST_CASE("distribution validation and uniformity checks", "[concepts]") {
  CHECK_THROWS_AS(Distribution(2, {0.5, 0.5, 0.5, 0.5}),
                  std::invalid_argument);
  CHECK_THROWS_AS(Distribution(2, {1.5, -0.5, 0.0, 0.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(Distribution(2, {1.0, 0.0}), std::invalid_argument);

  const Distribution u = Distribution::uniform(3);
  CHECK(u.is_uniform());
  CHECK(u.probability(5) == Approx(0.125).margin(1e-15));

  const Distribution skew(1, {0.75, 0.25});
  CHECK_FALSE(skew.is_uniform());
}

TEST_CASE("inverse-CDF sampling reproduces the distribution", "[concepts]") {
  const Distribution d(2, {0.1, 0.2, 0.3, 0.4});
  const std::vector<double> cdf = d.cumulative();
  RandomStream rng = RandomStream::derive(7, "dist_sampling");
  std::vector<std::size_t> counts(4, 0);
  const std::size_t draws = 200000;
  for (std::size_t i = 0; i < draws; ++i) {
    ++counts[sample_index(cdf, rng)];
  }
  for (std::uint32_t x = 0; x < 4; ++x) {
    const double freq =
        static_cast<double>(counts[x]) / static_cast<double>(draws);
    // 5 sigma of a binomial proportion at 2e5 draws is ~0.5%.
    CHECK(freq == Approx(d.probability(x)).margin(0.006));
  }
}

TEST_CASE("correlation matches frozen majority values and Fourier identity",
          "[concepts]") {
  const BooleanFunction maj = testing::maj3();
  const Distribution u = Distribution::uniform(3);
  CHECK(correlation(BooleanFunction::parity(3, 0), maj, u) ==
        Approx(0.0).margin(1e-15));
  CHECK(correlation(BooleanFunction::parity(3, 0b001), maj, u) ==
        Approx(0.5).margin(1e-15));

  // Under the uniform distribution E[f chi_S] is the coefficient f^(S).
  RandomStream rng = RandomStream::derive(11, "correlation_vs_spectrum");
  for (int rep = 0; rep < 10; ++rep) {
    const int n = 2 + static_cast<int>(rng.uniform_below(6));
    const BooleanFunction f = testing::random_boolean_function(n, rng);
    const FourierSpectrum spectrum = walsh_hadamard_transform(f);
    const auto s = static_cast<SetIndex>(rng.uniform_below(table_size(n)));
    REQUIRE(correlation(f, BooleanFunction::parity(n, s),
                        Distribution::uniform(n)) ==
            Approx(spectrum.coefficient(s)).margin(1e-12));
  }
}

TEST_CASE("parity concepts match their character truth tables", "[concepts]") {
  RandomStream rng = RandomStream::derive(13, "parity_eval");
  for (int rep = 0; rep < 20; ++rep) {
    const int n = 1 + static_cast<int>(rng.uniform_below(10));
    const auto s = static_cast<SetIndex>(rng.uniform_below(table_size(n)));
    const ParityConcept c(n, s);
    const BooleanFunction table = to_boolean_function(AnyConcept{c});
    REQUIRE(table == BooleanFunction::parity(n, s));
    // XOR homomorphism: chi_s(x) chi_s(y) = chi_s(x ^ y).
    const auto x = static_cast<std::uint32_t>(rng.uniform_below(table.size()));
    const auto y = static_cast<std::uint32_t>(rng.uniform_below(table.size()));
    REQUIRE(c.evaluate(x) * c.evaluate(y) == c.evaluate(x ^ y));
  }
  CHECK_THROWS_AS(ParityConcept(3, 0b1000), std::invalid_argument);
}

TEST_CASE("juntas depend only on their relevant coordinates", "[concepts]") {
  RandomStream rng = RandomStream::derive(17, "junta_relevance");
  for (int rep = 0; rep < 20; ++rep) {
    const int n = 3 + static_cast<int>(rng.uniform_below(8));
    const int k = static_cast<int>(rng.uniform_below(4));
    const JuntaConcept c = random_junta(n, k, rng);
    REQUIRE(c.arity() == k);

    std::uint32_t relevant_mask = 0;
    for (int coord : c.relevant) relevant_mask |= std::uint32_t{1} << coord;
    for (int trial = 0; trial < 50; ++trial) {
      const auto x = static_cast<std::uint32_t>(rng.uniform_below(table_size(n)));
      const auto noise =
          static_cast<std::uint32_t>(rng.uniform_below(table_size(n))) &
          ~relevant_mask;
      REQUIRE(c.evaluate(x) == c.evaluate(x ^ noise));
    }

    // Spectrum support lives inside the relevant coordinates.
    const FourierSpectrum spectrum =
        walsh_hadamard_transform(to_boolean_function(c));
    double outside = 0.0;
    for (SetIndex s = 0; s < table_size(n); ++s) {
      if ((s & ~relevant_mask) != 0) {
        outside += spectrum.coefficient(s) * spectrum.coefficient(s);
      }
    }
    REQUIRE(outside == Approx(0.0).margin(1e-12));
  }

  CHECK_THROWS_AS(JuntaConcept(4, {2, 1}, {1, 1, 1, -1}),
                  std::invalid_argument);
  CHECK_THROWS_AS(JuntaConcept(4, {1, 1}, {1, 1, 1, -1}),
                  std::invalid_argument);
  CHECK_THROWS_AS(JuntaConcept(4, {0, 5}, {1, 1, 1, -1}),
                  std::invalid_argument);
  CHECK_THROWS_AS(JuntaConcept(4, {0, 1}, {1, 1, -1}), std::invalid_argument);
}

TEST_CASE("DNF evaluation agrees with direct boolean logic", "[concepts]") {
  // (x0 AND NOT x2) OR (x1): TRUE maps to -1.
  const DnfConcept c(3, {{Literal{0, false}, Literal{2, true}},
                         {Literal{1, false}}});
  for (std::uint32_t x = 0; x < 8; ++x) {
    const bool x0 = (x & 1u) != 0;
    const bool x1 = (x & 2u) != 0;
    const bool x2 = (x & 4u) != 0;
    const bool truth = (x0 && !x2) || x1;
    REQUIRE(c.evaluate(x) == (truth ? -1 : +1));
  }

  // No terms: constant FALSE, i.e. +1 everywhere.
  const DnfConcept empty(3, {});
  for (std::uint32_t x = 0; x < 8; ++x) REQUIRE(empty.evaluate(x) == +1);

  CHECK_THROWS_AS(DnfConcept(3, {{}}), std::invalid_argument);
  CHECK_THROWS_AS(DnfConcept(3, {{Literal{0, false}, Literal{0, true}}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(DnfConcept(3, {{Literal{3, false}}}), std::invalid_argument);
}

TEST_CASE("random concept generators are seeded and well-formed",
          "[concepts]") {
  const RandomConceptParams params{.n = 8, .junta_arity = 3, .dnf_terms = 4,
                                   .literal_prob = 0.3};
  for (ConceptKind kind :
       {ConceptKind::kParity, ConceptKind::kJunta, ConceptKind::kDnf}) {
    const AnyConcept a = random_concept(kind, params, 42);
    const AnyConcept b = random_concept(kind, params, 42);
    const AnyConcept c = random_concept(kind, params, 43);
    REQUIRE(to_boolean_function(a) == to_boolean_function(b));
    // Different seeds give different concepts for these parameter sizes
    // (checked for the fixed seeds used here, not a universal claim).
    REQUIRE_FALSE(to_boolean_function(a) == to_boolean_function(c));
  }

  RandomStream rng = RandomStream::derive(23, "random_dnf_shape");
  for (int rep = 0; rep < 20; ++rep) {
    const DnfConcept dnf = random_dnf(6, 3, 0.25, rng);
    REQUIRE(dnf.terms.size() == 3);
    for (const auto& term : dnf.terms) {
      REQUIRE_FALSE(term.empty());
      std::set<int> vars;
      for (const Literal& lit : term) {
        REQUIRE(lit.var >= 0);
        REQUIRE(lit.var < 6);
        REQUIRE(vars.insert(lit.var).second);
      }
    }
  }

  // k = 0 juntas are the two constant functions.
  RandomStream rng0 = RandomStream::derive(23, "random_junta_k0");
  const JuntaConcept constant = random_junta(5, 0, rng0);
  const BooleanFunction table = to_boolean_function(constant);
  for (std::uint32_t x = 0; x < table.size(); ++x) {
    REQUIRE(table(x) == table(0));
  }
}

TEST_CASE("hypothesis prediction is the sign of its character sum",
          "[concepts]") {
  const Hypothesis h(3, {{0b001, 0.25}, {0b110, -0.75}});
  for (std::uint32_t x = 0; x < 8; ++x) {
    const double manual = 0.25 * parity_character(0b001, x) -
                          0.75 * parity_character(0b110, x);
    REQUIRE(h.weighted_sum(x) == Approx(manual).margin(1e-15));
    REQUIRE(h.predict(x) == sign_of(manual));
  }

  // Exact cancellation lands on the sign(0) = +1 convention.
  const Hypothesis tie(2, {{0b00, 1.0}, {0b01, -1.0}});
  CHECK(tie.predict(0) == +1);

  CHECK_THROWS_AS(Hypothesis(3, {{0b001, 1.0}, {0b001, 2.0}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(Hypothesis(3, {{0b1000, 1.0}}), std::invalid_argument);

  const Hypothesis parity_h = Hypothesis::parity(4, 0b1010);
  const BooleanFunction chi = BooleanFunction::parity(4, 0b1010);
  REQUIRE(parity_h.to_boolean_function() == chi);
}

TEST_CASE("error_rate: frozen dictator-vs-majority value and exactness",
          "[concepts]") {
  const BooleanFunction maj = testing::maj3();
  const Distribution u = Distribution::uniform(3);
  // The first coordinate's dictator disagrees with majority on 2 of 8 inputs.
  CHECK(error_rate(Hypothesis::parity(3, 0b001), maj, u) ==
        Approx(0.25).margin(1e-15));

  RandomStream rng = RandomStream::derive(29, "error_rate_manual");
  for (int rep = 0; rep < 10; ++rep) {
    const int n = 2 + static_cast<int>(rng.uniform_below(5));
    const BooleanFunction f = testing::random_boolean_function(n, rng);
    const auto s = static_cast<SetIndex>(rng.uniform_below(table_size(n)));
    const Hypothesis h = Hypothesis::parity(n, s);
    // Manual weighted count under a random distribution.
    std::vector<double> weights(table_size(n));
    double sum = 0.0;
    for (double& w : weights) {
      w = rng.uniform01() + 1e-3;
      sum += w;
    }
    for (double& w : weights) w /= sum;
    weights.back() += 1.0 - std::accumulate(weights.begin(), weights.end(), 0.0);
    const Distribution d(n, weights);
    double manual = 0.0;
    for (std::uint32_t x = 0; x < f.size(); ++x) {
      if (h.predict(x) != f(x)) manual += d.probability(x);
    }
    REQUIRE(error_rate(h, f, d) == Approx(manual).margin(1e-12));
  }

  // A hypothesis equal to the target has zero error.
  const Hypothesis exact(3, {{0b001, 0.5}, {0b010, 0.5}, {0b100, 0.5},
                             {0b111, -0.5}});
  CHECK(error_rate(exact, maj, u) == Approx(0.0).margin(1e-15));
}

}  // namespace
}  // namespace qsq
