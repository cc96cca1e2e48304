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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "qsq/boolean_function.hpp"
#include "qsq/concepts.hpp"
#include "qsq/learners.hpp"
#include "qsq/observable.hpp"
#include "qsq/oracle.hpp"
#include "qsq/rng.hpp"
#include "qsq/serialization.hpp"
#include "qsq/sqdim.hpp"

namespace qsq {
namespace {

BooleanFunction random_function(int n, RandomStream& rng) {
  std::vector<std::int8_t> values(table_size(n));
  for (auto& v : values) v = rng.random_bits(1) ? -1 : 1;
  return BooleanFunction(n, std::move(values));
}

/// Removes a scratch file even when a CHECK above failed first.
struct FileGuard {
  std::string path;
  ~FileGuard() { std::remove(path.c_str()); }
};

TEST_CASE("truth tables round-trip through JSON", "[serialization]") {
  RandomStream rng(11);
  for (int n : {1, 4, 7}) {
    const BooleanFunction f = random_function(n, rng);
    const Json j = function_to_json(f);
    CHECK(j.at("n").get<int>() == n);
    CHECK(j.at("values").size() == table_size(n));
    const BooleanFunction g = function_from_json(j);
    REQUIRE(g.dimension() == n);
    for (SetIndex x = 0; x < table_size(n); ++x) CHECK(g(x) == f(x));
    // Canonical layout: re-serializing the parsed value is byte-identical.
    CHECK(function_to_json(g).dump() == j.dump());
  }
}

TEST_CASE("malformed truth-table JSON is rejected", "[serialization]") {
  CHECK_THROWS_AS(function_from_json(Json{{"n", 2}, {"values", {1, -1, 1}}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      function_from_json(Json{{"n", 1}, {"values", {1, 0}}}),
      std::invalid_argument);
  CHECK_THROWS_AS(function_from_json(Json{{"n", 0}, {"values", {1}}}),
                  std::invalid_argument);
  CHECK_THROWS(function_from_json(Json{{"n", 2}}));  // missing key
}

TEST_CASE("bitstring layout is frozen: bit (x mod 8) of byte (x div 8)",
          "[serialization]") {
  // Majority of three bits: -1 exactly on inputs {3, 5, 6, 7}, so the single
  // byte is 0b11101000 = 0xE8.
  std::vector<std::int8_t> maj = {1, 1, 1, -1, 1, -1, -1, -1};
  const BooleanFunction f(3, maj);
  const std::vector<std::uint8_t> bytes = function_to_bitstring(f);
  REQUIRE(bytes.size() == 1);
  CHECK(bytes[0] == 0xE8);

  const BooleanFunction g = function_from_bitstring(bytes, 3);
  for (SetIndex x = 0; x < 8; ++x) CHECK(g(x) == f(x));

  // n = 1 pads the byte with zeros; input 0 lands in the low bit.
  const BooleanFunction neg_id(1, {-1, 1});
  CHECK(function_to_bitstring(neg_id) == std::vector<std::uint8_t>{0x01});
}

TEST_CASE("bitstrings round-trip at several sizes", "[serialization]") {
  RandomStream rng(12);
  for (int n : {1, 3, 6, 9}) {
    const BooleanFunction f = random_function(n, rng);
    const auto bytes = function_to_bitstring(f);
    CHECK(bytes.size() == (table_size(n) + 7) / 8);
    const BooleanFunction g = function_from_bitstring(bytes, n);
    for (SetIndex x = 0; x < table_size(n); ++x) CHECK(g(x) == f(x));
  }
  CHECK_THROWS_AS(function_from_bitstring({0x00}, 4),  // needs two bytes
                  std::invalid_argument);
}

TEST_CASE("spectra serialize as plain coefficient arrays", "[serialization]") {
  const BooleanFunction f = BooleanFunction::parity(3, 0b101);
  const FourierSpectrum s = walsh_hadamard_transform(f);
  const Json j = spectrum_to_json(s);
  REQUIRE(j.is_array());
  REQUIRE(j.size() == 8);
  const FourierSpectrum back = spectrum_from_json(j, 3);
  for (SetIndex t = 0; t < 8; ++t) {
    CHECK(back.coefficient(t) == s.coefficient(t));
  }
  CHECK_THROWS_AS(spectrum_from_json(j, 2), std::invalid_argument);
}

TEST_CASE("distributions round-trip and accept the uniform shorthand",
          "[serialization]") {
  const Distribution d(2, {0.1, 0.2, 0.3, 0.4});
  const Json j = distribution_to_json(d);
  const Distribution back = distribution_from_json(j, /*n_hint=*/-1);
  CHECK(back.dimension() == 2);
  CHECK(back.probabilities() == d.probabilities());

  const Distribution u = distribution_from_json(Json("uniform"), 5);
  CHECK(u.dimension() == 5);
  CHECK(u.is_uniform());

  CHECK_THROWS_AS(distribution_from_json(Json("uniform"), -1),
                  std::invalid_argument);
  CHECK_THROWS_AS(distribution_from_json(Json("gaussian"), 5),
                  std::invalid_argument);
}

TEST_CASE("all three concept kinds round-trip through tagged JSON",
          "[serialization]") {
  const ParityConcept parity(5, 0b10110);
  const JuntaConcept junta(6, {1, 4}, {1, -1, -1, 1});
  const DnfConcept dnf(4, {{Literal{0, false}, Literal{2, true}},
                           {Literal{3, false}}});

  for (const AnyConcept& c :
       {AnyConcept{parity}, AnyConcept{junta}, AnyConcept{dnf}}) {
    const Json j = concept_to_json(c);
    const AnyConcept back = concept_from_json(j);
    CHECK(back.index() == c.index());
    REQUIRE(concept_dimension(back) == concept_dimension(c));
    for (std::uint32_t x = 0; x < table_size(concept_dimension(c)); ++x) {
      CHECK(evaluate(back, x) == evaluate(c, x));
    }
    CHECK(concept_to_json(back).dump() == j.dump());
  }

  CHECK(concept_to_json(parity).at("kind") == "parity");
  CHECK(concept_to_json(junta).at("kind") == "junta");
  CHECK(concept_to_json(dnf).at("kind") == "dnf");
  CHECK_THROWS_AS(concept_from_json(Json{{"kind", "circuit"}, {"n", 3}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      concept_from_json(Json{
          {"kind", "junta"}, {"n", 3}, {"relevant", {0}}, {"table", {1, 0}}}),
      std::invalid_argument);
}

TEST_CASE("hypotheses round-trip with exact coefficients", "[serialization]") {
  const Hypothesis h(4, {{0b0011, 0.125}, {0b1000, -0.7071067811865476}});
  const Json j = hypothesis_to_json(h);
  const Hypothesis back = hypothesis_from_json(j);
  REQUIRE(back.entries().size() == 2);
  CHECK(back.entries()[0].set == 0b0011);
  CHECK(back.entries()[0].coeff == 0.125);
  CHECK(back.entries()[1].set == 0b1000);
  CHECK(back.entries()[1].coeff == -0.7071067811865476);
  for (std::uint32_t x = 0; x < 16; ++x) CHECK(back.predict(x) == h.predict(x));
}

TEST_CASE("observables of every kind round-trip", "[serialization]") {
  const BooleanFunction target = BooleanFunction::parity(3, 0b011);
  const ExampleSpec spec = ExampleSpec::noiseless_uniform(target);

  SECTION("diagonal") {
    RandomStream rng(21);
    std::vector<double> phi(table_size(4));
    for (auto& p : phi) p = rng.uniform_in(-1.0, 1.0);
    const Observable m = diagonal_from_phi(3, phi);
    const Observable back = observable_from_json(observable_to_json(m));
    REQUIRE(std::holds_alternative<DiagonalObservable>(back));
    CHECK(std::get<DiagonalObservable>(back).phi() == phi);
  }

  SECTION("fourier mass") {
    const SubsetPattern pattern(3, 0b001, 0b100);
    const Observable m = fourier_mass_observable(pattern);
    const Json j = observable_to_json(m);
    CHECK(j.at("kind") == "fourier_mass");
    CHECK(j.at("must_be_one").get<SetIndex>() == 0b001);
    CHECK(j.at("must_be_zero").get<SetIndex>() == 0b100);
    const Observable back = observable_from_json(j);
    REQUIRE(std::holds_alternative<FourierMassObservable>(back));
    CHECK(std::get<FourierMassObservable>(back).pattern() == pattern);
    CHECK(exact_expectation(spec, back) == exact_expectation(spec, m));
  }

  SECTION("dense hermitian matrix, exact entries") {
    const std::size_t dim = table_size(2);  // n = 1 example state space
    Eigen::MatrixXcd mat = Eigen::MatrixXcd::Zero(dim, dim);
    mat(0, 1) = {0.25, -0.5};
    mat(1, 0) = {0.25, 0.5};
    mat(2, 2) = {0.375, 0.0};
    mat(3, 3) = {-1.0, 0.0};
    const Observable m = Observable{DenseObservable(1, mat)};
    const Observable back = observable_from_json(observable_to_json(m));
    REQUIRE(std::holds_alternative<DenseObservable>(back));
    CHECK(std::get<DenseObservable>(back).matrix() == mat);
  }

  SECTION("malformed") {
    CHECK_THROWS_AS(observable_from_json(Json{{"kind", "sparse"}, {"n", 2}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(
        observable_from_json(Json{
            {"kind", "dense"}, {"n", 1}, {"matrix", Json::array()}}),
        std::invalid_argument);
  }
}

TEST_CASE("concept classes round-trip with and without labels",
          "[serialization]") {
  const ConceptClassTable parities = ConceptClassTable::parities(3);
  const Json j = concept_class_to_json(parities);
  const ConceptClassTable back = concept_class_from_json(j);
  REQUIRE(back.size() == 8);
  CHECK(back.label_of(5) == "chi_5");
  for (std::size_t i = 0; i < back.size(); ++i) {
    for (SetIndex x = 0; x < 8; ++x) CHECK(back[i](x) == parities[i](x));
  }

  const ConceptClassTable unlabeled(
      {BooleanFunction::constant(2, 1), BooleanFunction::constant(2, -1)});
  const Json j2 = concept_class_to_json(unlabeled);
  CHECK_FALSE(j2.contains("labels"));
  CHECK(concept_class_from_json(j2).labels().empty());
}

TEST_CASE("report serializers expose the agreed key sets", "[serialization]") {
  SECTION("protocol result carries exactly five keys") {
    const ProtocolResult r{24, 8, 1.0, 100, 0.49, true};
    const Json j = protocol_result_to_json(r);
    REQUIRE(j.size() == 5);
    CHECK(j.at("bits").get<std::size_t>() == 24);
    CHECK(j.at("queries").get<std::size_t>() == 8);
    CHECK(j.at("success").get<double>() == 1.0);
    CHECK(j.at("trials").get<std::size_t>() == 100);
    CHECK(j.at("gamma_target").get<double>() == 0.49);
  }

  SECTION("dimension result") {
    const Json j = sqdim_result_to_json(SqdimResult{32, true});
    REQUIRE(j.size() == 2);
    CHECK(j.at("d").get<std::size_t>() == 32);
    CHECK(j.at("exact").get<bool>() == true);
  }

  SECTION("learner report embeds hypothesis and phase counts") {
    const LearnerReport r{Hypothesis::parity(3, 0b101), 3, 1.0 / 6.0,
                          {PhaseCount{"influence", 3}}};
    const Json j = learner_report_to_json(r);
    CHECK(j.at("queries_used").get<std::size_t>() == 3);
    CHECK(j.at("hypothesis").at("n").get<int>() == 3);
    CHECK(j.at("phases").at(0).at("name") == "influence");
  }
}

TEST_CASE("game reports serialize without the transcript; the transcript "
          "exports as CSV",
          "[serialization]") {
  const ConceptClassTable cls = ConceptClassTable::parities(3);
  const Distribution uniform = Distribution::uniform(3);
  auto learner = [](AdversaryOracle& oracle) {
    return learn_parity(oracle, 3).hypothesis;
  };
  const GameReport report =
      run_lower_bound_game(learner, cls, uniform, 1.0 / 12.0, 0.1);

  const Json j = game_report_to_json(report);
  CHECK(j.at("queries").get<std::size_t>() == 3);
  CHECK(j.at("surviving").get<std::size_t>() == report.surviving);
  CHECK_FALSE(j.contains("transcript"));

  const std::string csv = game_transcript_csv(report);
  REQUIRE(csv.rfind("query_index,kind,tau_query,answer,live_before,live_after",
                    0) == 0);
  // Header plus one line per query, each ending in a newline.
  const auto line_count =
      static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n'));
  CHECK(line_count == 1 + report.queries);
}

TEST_CASE("simulation trial CSV derives error and coverage columns",
          "[serialization]") {
  const std::vector<SimulationTrialRow> rows = {
      {0, 738, 0.53, 0.5}, {1, 738, 0.12, 0.25}};
  const std::string csv = simulation_trials_csv(rows, 0.1);
  REQUIRE(csv.rfind("trial,copies_used,alpha,exact,abs_error,within_tau", 0) ==
          0);
  const auto first_end = csv.find('\n');
  const auto second_end = csv.find('\n', first_end + 1);
  const std::string row0 = csv.substr(first_end + 1,
                                      second_end - first_end - 1);
  CHECK(row0.rfind("0,738,", 0) == 0);
  CHECK(row0.back() == '1');  // |0.53 - 0.5| <= 0.1
  CHECK(csv.substr(csv.size() - 2) == "0\n");  // |0.12 - 0.25| > 0.1
}

TEST_CASE("JSON and bitstring files save and load", "[serialization]") {
  const FileGuard json_file{"serialization_scratch.json"};
  const Json payload{{"n", 2}, {"values", {1, -1, -1, 1}}};
  save_json_file(json_file.path, payload);
  const std::string text = load_text_file(json_file.path);
  CHECK(text.back() == '\n');
  CHECK(load_json_file(json_file.path) == payload);

  const FileGuard bits_file{"serialization_scratch.bits"};
  RandomStream rng(31);
  const BooleanFunction f = random_function(5, rng);
  save_bitstring_file(bits_file.path, f);
  const BooleanFunction g = load_bitstring_file(bits_file.path, 5);
  for (SetIndex x = 0; x < table_size(5); ++x) CHECK(g(x) == f(x));

  CHECK_THROWS_AS(load_text_file("no/such/dir/missing.json"),
                  std::runtime_error);
  CHECK_THROWS_AS(save_text_file("no/such/dir/out.json", "x"),
                  std::runtime_error);
}

}  // namespace
}  // namespace qsq
