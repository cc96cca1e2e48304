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
#include <vector>

#include "qsq/boolean_function.hpp"
#include "qsq/concepts.hpp"
#include "qsq/learners.hpp"
#include "qsq/oracle.hpp"
#include "qsq/rng.hpp"
#include "support/test_oracles.hpp"

namespace qsq {
namespace {

using Catch::Approx;

SetIndex recovered_parity(const LearnerReport& report) {
  REQUIRE(report.hypothesis.entries().size() == 1);
  return report.hypothesis.entries().front().set;
}

SetIndex union_of_entry_sets(const LearnerReport& report) {
  SetIndex mask = 0;
  for (const auto& e : report.hypothesis.entries()) mask |= e.set;
  return mask;
}

TEST_CASE("parity learner recovers every target under exact and adversarial "
          "oracles",
          "[learners]") {
  RandomStream rng = RandomStream::derive(211, "parity_recovery");
  for (int n = 1; n <= 10; ++n) {
    for (int rep = 0; rep < 5; ++rep) {
      const auto s = static_cast<SetIndex>(rng.uniform_below(table_size(n)));
      const ExampleSpec spec =
          ExampleSpec::noiseless_uniform(BooleanFunction::parity(n, s));
      for (const ToleranceModel& model :
           {ToleranceModel{ExactModel{}},
            ToleranceModel{GridAdversaryModel{1.0 / 6.0}},
            ToleranceModel{GridAdversaryModel{}}}) {
        QstatOracle oracle(spec, model);
        const LearnerReport report = learn_parity(oracle, n);
        REQUIRE(recovered_parity(report) == s);
        REQUIRE(report.queries_used == static_cast<std::size_t>(n));
        REQUIRE(oracle.query_count() == static_cast<std::size_t>(n));
        REQUIRE(report.min_tolerance_used == Approx(1.0 / 6.0));
      }
    }
  }
}

TEST_CASE("adversarial parity answers land on the coarse grid yet decide "
          "correctly",
          "[learners]") {
  const int n = 6;
  const SetIndex s = 0b101001;
  const ExampleSpec spec =
      ExampleSpec::noiseless_uniform(BooleanFunction::parity(n, s));
  QstatOracle oracle(spec, GridAdversaryModel{1.0 / 6.0});
  const LearnerReport report = learn_parity(oracle, n);
  REQUIRE(recovered_parity(report) == s);
  for (const QueryRecord& r : oracle.log().records()) {
    // Influences are 0 or 1/2 (oracle halves them); the 1/3-spaced grid
    // renders those as 0 and 2/3.
    const bool low = r.alpha == Approx(0.0).margin(1e-12);
    const bool high = r.alpha == Approx(2.0 / 3.0).margin(1e-12);
    REQUIRE((low || high));
  }
}

TEST_CASE("parity learner succeeds on sampled measurement backends",
          "[learners]") {
  const int n = 8;
  RandomStream rng = RandomStream::derive(211, "parity_sampling");
  for (int rep = 0; rep < 3; ++rep) {
    const auto s = static_cast<SetIndex>(rng.uniform_below(table_size(n)));
    const ExampleSpec spec =
        ExampleSpec::noiseless_uniform(BooleanFunction::parity(n, s));
    QstatOracle oracle(spec,
                       SamplingModel{4000, static_cast<std::uint64_t>(1000 + rep)});
    REQUIRE(recovered_parity(learn_parity(oracle, n)) == s);
  }
}

TEST_CASE("junta learner meets its error budget with the exact query count",
          "[learners]") {
  RandomStream rng = RandomStream::derive(211, "junta_budget");
  const int n = 10;
  const double epsilon = 0.1;
  for (int k = 0; k <= 4; ++k) {
    for (int rep = 0; rep < 4; ++rep) {
      const JuntaConcept target = random_junta(n, k, rng);
      SetIndex relevant_mask = 0;
      for (int coord : target.relevant) {
        relevant_mask |= SetIndex{1} << coord;
      }
      const BooleanFunction table = to_boolean_function(target);
      const ExampleSpec spec = ExampleSpec::noiseless_uniform(table);
      for (const ToleranceModel& model :
           {ToleranceModel{ExactModel{}}, ToleranceModel{GridAdversaryModel{}}}) {
        QstatOracle oracle(spec, model);
        const LearnerReport report = learn_junta(oracle, n, k, epsilon);

        REQUIRE(error_rate(report.hypothesis, table,
                           Distribution::uniform(n)) <= epsilon);

        if (k == 0) {
          REQUIRE(report.queries_used == 1);
        } else {
          const SetIndex found = union_of_entry_sets(report);
          // Any legal oracle keeps the located coordinates inside the true
          // relevant set.
          REQUIRE((found & ~relevant_mask) == 0);
          const auto t_size = static_cast<std::size_t>(std::popcount(found));
          REQUIRE(t_size <= static_cast<std::size_t>(k));
          REQUIRE(report.queries_used ==
                  static_cast<std::size_t>(n) + (std::size_t{1} << t_size));
        }
        REQUIRE(report.queries_used == oracle.query_count());
      }
    }
  }
}

TEST_CASE("junta learner validates its parameters", "[learners]") {
  const ExampleSpec spec =
      ExampleSpec::noiseless_uniform(BooleanFunction::parity(4, 0b1));
  QstatOracle oracle(spec, ExactModel{});
  CHECK_THROWS_AS(learn_junta(oracle, 4, -1, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(learn_junta(oracle, 4, 5, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(learn_junta(oracle, 4, 2, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(learn_junta(oracle, 4, 2, 1.0), std::invalid_argument);
}

TEST_CASE("heavy-coefficient search reproduces the frozen majority sets",
          "[learners]") {
  const ExampleSpec spec = ExampleSpec::noiseless_uniform(testing::maj3());
  for (const ToleranceModel& model :
       {ToleranceModel{ExactModel{}}, ToleranceModel{GridAdversaryModel{}}}) {
    QstatOracle wide(spec, model);
    CHECK(goldreich_levin(wide, 3, 0.45) ==
          std::vector<SetIndex>{0b001, 0b010, 0b100, 0b111});
    QstatOracle narrow(spec, model);
    CHECK(goldreich_levin(narrow, 3, 0.9).empty());
  }
}

TEST_CASE("heavy-coefficient search meets both guarantees on planted spectra",
          "[learners]") {
  RandomStream rng = RandomStream::derive(211, "gl_guarantees");
  for (int rep = 0; rep < 12; ++rep) {
    const int n = 6 + static_cast<int>(rng.uniform_below(3));
    const BooleanFunction f = testing::planted_sparse_function(
        n, 1 + static_cast<int>(rng.uniform_below(4)), rng);
    const FourierSpectrum spectrum = walsh_hadamard_transform(f);
    const ExampleSpec spec = ExampleSpec::noiseless_uniform(f);
    for (double tau : {0.2, 0.4}) {
      for (const ToleranceModel& model : {ToleranceModel{ExactModel{}},
                                          ToleranceModel{GridAdversaryModel{}}}) {
        QstatOracle oracle(spec, model);
        GoldreichLevinStats stats;
        const std::vector<SetIndex> found =
            goldreich_levin(oracle, n, tau, &stats);

        for (SetIndex s = 0; s < f.size(); ++s) {
          const double c = std::abs(spectrum.coefficient(s));
          const bool in_found =
              std::find(found.begin(), found.end(), s) != found.end();
          if (c >= tau) REQUIRE(in_found);           // completeness
          if (in_found) REQUIRE(c >= tau / 2.0);     // soundness
        }

        // Query accounting: bounded by the Parseval bucket argument.
        const double per_level = 8.0 / (tau * tau) + 1.0;
        REQUIRE(static_cast<double>(stats.bucket_queries) <=
                static_cast<double>(n) * per_level);
        REQUIRE(oracle.query_count() ==
                stats.bucket_queries + stats.confirmation_queries);
      }
    }
  }
}

TEST_CASE("DNF learner reaches the target error on seeded random targets",
          "[learners]") {
  RandomStream rng = RandomStream::derive(211, "dnf_error");
  const int n = 8;
  const int terms = 3;
  const double epsilon = 0.2;
  for (int rep = 0; rep < 10; ++rep) {
    const DnfConcept target = random_dnf(n, terms, 0.3, rng);
    const BooleanFunction table = to_boolean_function(target);
    const ExampleSpec spec = ExampleSpec::noiseless_uniform(table);
    QstatOracle oracle(spec, ExactModel{});
    const LearnerReport report = learn_dnf(oracle, n, terms, epsilon);
    REQUIRE(error_rate(report.hypothesis, table, Distribution::uniform(n)) <=
            epsilon);
    REQUIRE(report.queries_used == oracle.query_count());
  }
}

TEST_CASE("learners reject oracles outside their preconditions",
          "[learners]") {
  RandomStream rng = RandomStream::derive(211, "learner_rejects");
  const BooleanFunction f = testing::random_boolean_function(4, rng);

  QstatOracle noisy(ExampleSpec(f, Distribution::uniform(4), 0.1),
                    ExactModel{});
  CHECK_THROWS_AS(learn_parity(noisy, 4), std::invalid_argument);
  CHECK_THROWS_AS(learn_junta(noisy, 4, 2, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(goldreich_levin(noisy, 4, 0.3), std::invalid_argument);
  CHECK_THROWS_AS(learn_dnf(noisy, 4, 2, 0.2), std::invalid_argument);

  QstatOracle skewed(
      ExampleSpec(f, Distribution(4, testing::random_probability_vector(
                                          16, rng)),
                  0.0),
      ExactModel{});
  CHECK_THROWS_AS(learn_parity(skewed, 4), std::invalid_argument);

  QstatOracle clean(ExampleSpec::noiseless_uniform(f), ExactModel{});
  CHECK_THROWS_AS(learn_parity(clean, 5), std::invalid_argument);
  CHECK_THROWS_AS(goldreich_levin(clean, 4, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(goldreich_levin(clean, 4, 1.1), std::invalid_argument);
}

TEST_CASE("exact-oracle learner runs are deterministic", "[learners]") {
  RandomStream rng = RandomStream::derive(211, "learner_determinism");
  const BooleanFunction f = testing::planted_sparse_function(6, 2, rng);
  const ExampleSpec spec = ExampleSpec::noiseless_uniform(f);

  QstatOracle a(spec, ExactModel{});
  QstatOracle b(spec, ExactModel{});
  const LearnerReport ra = learn_dnf(a, 6, 2, 0.25);
  const LearnerReport rb = learn_dnf(b, 6, 2, 0.25);
  REQUIRE(ra.queries_used == rb.queries_used);
  REQUIRE(ra.hypothesis.entries().size() == rb.hypothesis.entries().size());
  for (std::size_t i = 0; i < ra.hypothesis.entries().size(); ++i) {
    REQUIRE(ra.hypothesis.entries()[i].set == rb.hypothesis.entries()[i].set);
    REQUIRE(ra.hypothesis.entries()[i].coeff ==
            rb.hypothesis.entries()[i].coeff);
  }
}

}  // namespace
}  // namespace qsq
