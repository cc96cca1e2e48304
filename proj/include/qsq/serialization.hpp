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

#ifndef QSQ_SERIALIZATION_HPP_
#define QSQ_SERIALIZATION_HPP_

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "qsq/boolean_function.hpp"
#include "qsq/concepts.hpp"
#include "qsq/learners.hpp"
#include "qsq/observable.hpp"
#include "qsq/oracle.hpp"
#include "qsq/privacy.hpp"
#include "qsq/protocol.hpp"
#include "qsq/sqdim.hpp"

namespace qsq {

// JSON and flat-file codecs for every shared artifact.  All coordinates and
// set masks are 0-based integers; JSON layouts are canonical (keys sorted),
// so identical values always produce identical bytes.

using Json = nlohmann::json;

// ---------------------------------------------------------------------------
// Boolean functions and spectra

inline Json function_to_json(const BooleanFunction& f) {
  Json values = Json::array();
  for (SetIndex x = 0; x < table_size(f.dimension()); ++x) {
    values.push_back(static_cast<int>(f(x)));
  }
  return Json{{"n", f.dimension()}, {"values", std::move(values)}};
}

inline BooleanFunction function_from_json(const Json& j) {
  const int n = j.at("n").get<int>();
  check_dimension(n);
  const auto raw = j.at("values").get<std::vector<int>>();
  if (raw.size() != table_size(n)) {
    throw std::invalid_argument("truth table length must be 2^n");
  }
  std::vector<std::int8_t> values(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (raw[i] != 1 && raw[i] != -1) {
      throw std::invalid_argument("truth table entries must be +1 or -1");
    }
    values[i] = static_cast<std::int8_t>(raw[i]);
  }
  return BooleanFunction(n, std::move(values));
}

/// Spectra are plain arrays of coefficients in set-index order.
inline Json spectrum_to_json(const FourierSpectrum& s) {
  return Json(s.coefficients);
}

inline FourierSpectrum spectrum_from_json(const Json& j, int n) {
  check_dimension(n);
  auto coefficients = j.get<std::vector<double>>();
  if (coefficients.size() != table_size(n)) {
    throw std::invalid_argument("spectrum length must be 2^n");
  }
  return FourierSpectrum{n, std::move(coefficients)};
}

/// Packed truth table: one bit per input, 0 for +1 and 1 for -1, input x
/// stored at bit (x mod 8) of byte (x div 8).
inline std::vector<std::uint8_t> function_to_bitstring(
    const BooleanFunction& f) {
  const std::size_t bits = table_size(f.dimension());
  std::vector<std::uint8_t> bytes((bits + 7) / 8, 0);
  for (SetIndex x = 0; x < bits; ++x) {
    if (f(x) < 0) bytes[x / 8] |= static_cast<std::uint8_t>(1u << (x % 8));
  }
  return bytes;
}

inline BooleanFunction function_from_bitstring(
    const std::vector<std::uint8_t>& bytes, int n) {
  check_dimension(n);
  const std::size_t bits = table_size(n);
  if (bytes.size() != (bits + 7) / 8) {
    throw std::invalid_argument("bitstring length does not match 2^n inputs");
  }
  std::vector<std::int8_t> values(bits);
  for (SetIndex x = 0; x < bits; ++x) {
    values[x] = ((bytes[x / 8] >> (x % 8)) & 1u) ? -1 : 1;
  }
  return BooleanFunction(n, std::move(values));
}

// ---------------------------------------------------------------------------
// Distributions

inline Json distribution_to_json(const Distribution& d) {
  return Json{{"n", d.dimension()}, {"probs", d.probabilities()}};
}

/// Accepts either the explicit {"n", "probs"} object or the string
/// "uniform"; the caller supplies n for the shorthand (pass -1 to forbid it).
inline Distribution distribution_from_json(const Json& j, int n_hint) {
  if (j.is_string()) {
    if (j.get<std::string>() != "uniform") {
      throw std::invalid_argument(
          "the only shorthand distribution is \"uniform\"");
    }
    if (n_hint < 1) {
      throw std::invalid_argument(
          "\"uniform\" needs the dimension from context");
    }
    return Distribution::uniform(n_hint);
  }
  const int n = j.at("n").get<int>();
  check_dimension(n);
  return Distribution(n, j.at("probs").get<std::vector<double>>());
}

// ---------------------------------------------------------------------------
// Concepts and hypotheses

inline Json concept_to_json(const ParityConcept& c) {
  return Json{{"kind", "parity"}, {"n", c.n}, {"s", c.s}};
}

inline Json concept_to_json(const JuntaConcept& c) {
  Json table = Json::array();
  for (std::int8_t v : c.table) table.push_back(static_cast<int>(v));
  return Json{{"kind", "junta"},
              {"n", c.n},
              {"relevant", c.relevant},
              {"table", std::move(table)}};
}

inline Json concept_to_json(const DnfConcept& c) {
  Json terms = Json::array();
  for (const auto& term : c.terms) {
    Json literals = Json::array();
    for (const Literal& lit : term) {
      literals.push_back(Json{{"var", lit.var}, {"neg", lit.negated}});
    }
    terms.push_back(std::move(literals));
  }
  return Json{{"kind", "dnf"}, {"n", c.n}, {"terms", std::move(terms)}};
}

inline Json concept_to_json(const AnyConcept& c) {
  return std::visit([](const auto& inner) { return concept_to_json(inner); },
                    c);
}

inline AnyConcept concept_from_json(const Json& j) {
  const auto kind = j.at("kind").get<std::string>();
  const int n = j.at("n").get<int>();
  check_dimension(n);
  if (kind == "parity") {
    return ParityConcept{n, j.at("s").get<SetIndex>()};
  }
  if (kind == "junta") {
    const auto relevant = j.at("relevant").get<std::vector<int>>();
    const auto raw = j.at("table").get<std::vector<int>>();
    std::vector<std::int8_t> table(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) {
      if (raw[i] != 1 && raw[i] != -1) {
        throw std::invalid_argument("junta table entries must be +1 or -1");
      }
      table[i] = static_cast<std::int8_t>(raw[i]);
    }
    return JuntaConcept{n, relevant, std::move(table)};
  }
  if (kind == "dnf") {
    std::vector<std::vector<Literal>> terms;
    for (const Json& term : j.at("terms")) {
      std::vector<Literal> literals;
      for (const Json& lit : term) {
        literals.push_back(
            Literal{lit.at("var").get<int>(), lit.at("neg").get<bool>()});
      }
      terms.push_back(std::move(literals));
    }
    return DnfConcept{n, std::move(terms)};
  }
  throw std::invalid_argument("unknown concept kind: " + kind);
}

inline Json hypothesis_to_json(const Hypothesis& h) {
  Json entries = Json::array();
  for (const Hypothesis::Entry& e : h.entries()) {
    entries.push_back(Json{{"set", e.set}, {"coeff", e.coeff}});
  }
  return Json{{"n", h.dimension()}, {"entries", std::move(entries)}};
}

inline Hypothesis hypothesis_from_json(const Json& j) {
  const int n = j.at("n").get<int>();
  check_dimension(n);
  std::vector<Hypothesis::Entry> entries;
  for (const Json& e : j.at("entries")) {
    entries.push_back(Hypothesis::Entry{e.at("set").get<SetIndex>(),
                                        e.at("coeff").get<double>()});
  }
  return Hypothesis(n, std::move(entries));
}

// ---------------------------------------------------------------------------
// Observables

inline Json observable_to_json(const Observable& m) {
  const int n = observable_dimension(m);
  if (const auto* d = std::get_if<DiagonalObservable>(&m)) {
    return Json{{"kind", "diagonal"}, {"n", n}, {"phi", d->phi()}};
  }
  if (const auto* fm = std::get_if<FourierMassObservable>(&m)) {
    return Json{{"kind", "fourier_mass"},
                {"n", n},
                {"must_be_one", fm->pattern().must_be_one()},
                {"must_be_zero", fm->pattern().must_be_zero()}};
  }
  const auto& dense = std::get<DenseObservable>(m);
  Json rows = Json::array();
  const auto& mat = dense.matrix();
  for (Eigen::Index r = 0; r < mat.rows(); ++r) {
    for (Eigen::Index c = 0; c < mat.cols(); ++c) {
      rows.push_back(Json::array({mat(r, c).real(), mat(r, c).imag()}));
    }
  }
  return Json{{"kind", "dense"}, {"n", n}, {"matrix", std::move(rows)}};
}

inline Observable observable_from_json(const Json& j) {
  const auto kind = j.at("kind").get<std::string>();
  const int n = j.at("n").get<int>();
  check_dimension(n);
  if (kind == "diagonal") {
    return diagonal_from_phi(n, j.at("phi").get<std::vector<double>>());
  }
  if (kind == "fourier_mass") {
    return fourier_mass_observable(
        SubsetPattern(n, j.at("must_be_one").get<SetIndex>(),
                      j.at("must_be_zero").get<SetIndex>()));
  }
  if (kind == "dense") {
    const Json& rows = j.at("matrix");
    const std::size_t dim = table_size(n + 1);
    if (rows.size() != dim * dim) {
      throw std::invalid_argument(
          "dense matrix must list 2^(n+1) x 2^(n+1) entries row-major");
    }
    Eigen::MatrixXcd mat(dim, dim);
    std::size_t k = 0;
    for (std::size_t r = 0; r < dim; ++r) {
      for (std::size_t c = 0; c < dim; ++c, ++k) {
        const Json& cell = rows.at(k);
        mat(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = {
            cell.at(0).get<double>(), cell.at(1).get<double>()};
      }
    }
    return DenseObservable(n, std::move(mat));
  }
  throw std::invalid_argument("unknown observable kind: " + kind);
}

// ---------------------------------------------------------------------------
// Concept classes

inline Json concept_class_to_json(const ConceptClassTable& cls) {
  Json concepts = Json::array();
  for (const BooleanFunction& c : cls.concepts()) {
    concepts.push_back(function_to_json(c));
  }
  Json out{{"concepts", std::move(concepts)}};
  if (!cls.labels().empty()) out["labels"] = cls.labels();
  return out;
}

inline ConceptClassTable concept_class_from_json(const Json& j) {
  std::vector<BooleanFunction> concepts;
  for (const Json& c : j.at("concepts")) {
    concepts.push_back(function_from_json(c));
  }
  std::vector<std::string> labels;
  if (j.contains("labels")) labels = j.at("labels").get<std::vector<std::string>>();
  return ConceptClassTable(std::move(concepts), std::move(labels));
}

// ---------------------------------------------------------------------------
// Reports

inline Json learner_report_to_json(const LearnerReport& r) {
  Json phases = Json::array();
  for (const PhaseCount& p : r.phases) {
    phases.push_back(Json{{"name", p.name}, {"queries", p.queries}});
  }
  return Json{{"hypothesis", hypothesis_to_json(r.hypothesis)},
              {"queries_used", r.queries_used},
              {"min_tolerance_used", r.min_tolerance_used},
              {"phases", std::move(phases)}};
}

inline Json sqdim_result_to_json(const SqdimResult& r) {
  return Json{{"d", r.dimension}, {"exact", r.exact}};
}

inline Json game_report_to_json(const GameReport& r) {
  return Json{{"queries", r.queries},
              {"surviving", r.surviving},
              {"survivors", r.survivors},
              {"worst_error", r.worst_error},
              {"worst_index", r.worst_index},
              {"met_target", r.met_target},
              {"information_bound_queries", r.information_bound_queries},
              {"information_bound_respected", r.information_bound_respected}};
}

/// Query-vs-live curve for plotting: one row per adversary answer.
inline std::string game_transcript_csv(const GameReport& r) {
  std::ostringstream out;
  out << "query_index,kind,tau_query,answer,live_before,live_after\n";
  out << std::setprecision(17);
  for (const AdversaryStep& s : r.transcript) {
    out << s.index << ',' << s.kind << ',' << s.tau_query << ',' << s.answer
        << ',' << s.live_before.size() << ',' << s.live_after.size() << '\n';
  }
  return out.str();
}

inline Json protocol_result_to_json(const ProtocolResult& r) {
  return Json{{"bits", r.bits_per_execution},
              {"queries", r.queries},
              {"success", r.success},
              {"trials", r.trials},
              {"gamma_target", r.gamma_target}};
}

inline Json private_learn_report_to_json(const PrivateLearnReport& r) {
  return Json{{"hypothesis", hypothesis_to_json(r.hypothesis)},
              {"queries", r.queries},
              {"samples_per_query", r.samples_per_query},
              {"total_samples", r.total_samples},
              {"alpha", r.alpha},
              {"delta", r.delta},
              {"noise_trace", r.noise_trace}};
}

inline Json dp_audit_report_to_json(const DpAuditReport& r) {
  Json bins = Json::array();
  for (const DpAuditBin& b : r.bins) {
    bins.push_back(Json{{"lo", b.lo},
                        {"hi", b.hi},
                        {"count_p", b.count_p},
                        {"count_q", b.count_q},
                        {"compared", b.compared},
                        {"log_ratio", b.log_ratio},
                        {"slack", b.slack}});
  }
  return Json{{"alpha", r.alpha},
              {"samples", r.samples},
              {"compared_bins", r.compared_bins},
              {"skipped_bins", r.skipped_bins},
              {"max_log_ratio", r.max_log_ratio},
              {"pass", r.pass},
              {"bins", std::move(bins)}};
}

/// Per-trial simulation row for the coverage experiments.
struct SimulationTrialRow {
  std::size_t trial = 0;
  std::size_t copies_used = 0;
  double alpha = 0.0;
  double exact = 0.0;
};

inline std::string simulation_trials_csv(
    const std::vector<SimulationTrialRow>& rows, double tau) {
  std::ostringstream out;
  out << "trial,copies_used,alpha,exact,abs_error,within_tau\n";
  out << std::setprecision(17);
  for (const SimulationTrialRow& r : rows) {
    const double abs_error = std::abs(r.alpha - r.exact);
    out << r.trial << ',' << r.copies_used << ',' << r.alpha << ','
        << r.exact << ',' << abs_error << ','
        << (abs_error <= tau ? 1 : 0) << '\n';
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Files

inline void save_text_file(const std::string& path,
                           const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path);
}

inline std::string load_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

inline void save_json_file(const std::string& path, const Json& j) {
  save_text_file(path, j.dump(2) + "\n");
}

inline Json load_json_file(const std::string& path) {
  return Json::parse(load_text_file(path));
}

inline void save_bitstring_file(const std::string& path,
                                const BooleanFunction& f) {
  const std::vector<std::uint8_t> bytes = function_to_bitstring(f);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("write failed: " + path);
}

inline BooleanFunction load_bitstring_file(const std::string& path, int n) {
  const std::string raw = load_text_file(path);
  std::vector<std::uint8_t> bytes(raw.begin(), raw.end());
  return function_from_bitstring(bytes, n);
}

}  // namespace qsq

#endif  // QSQ_SERIALIZATION_HPP_
