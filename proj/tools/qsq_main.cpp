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
//
// Experiment runner: every learner, simulation, game, protocol, and audit in
// the library as a seeded subcommand with machine-readable output.
//
// Conventions shared by all subcommands:
//   - The JSON report goes to stdout; --out additionally writes it to a file
//     (relative paths resolve under $QSQ_OUTPUT_DIR when that is set).
//   - --config names a JSON file whose flat keys mirror the flags; values
//     given on the command line win.
//   - --seed is mandatory whenever the run draws anything random.  Each trial
//     derives its own stream from (seed, subcommand, trial index), so reports
//     are byte-identical across reruns and across --workers settings.
//   - Exit codes: 0 the run's acceptance predicate holds, 1 it does not,
//     2 usage/config error, 3 internal contract violation.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <iostream>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "qsq/boolean_function.hpp"
#include "qsq/concepts.hpp"
#include "qsq/learners.hpp"
#include "qsq/observable.hpp"
#include "qsq/oracle.hpp"
#include "qsq/pac.hpp"
#include "qsq/privacy.hpp"
#include "qsq/protocol.hpp"
#include "qsq/rng.hpp"
#include "qsq/serialization.hpp"
#include "qsq/sqdim.hpp"
#include "qsq/version.hpp"

namespace {

using qsq::Json;

constexpr int kExitSuccess = 0;
constexpr int kExitPredicateFailed = 1;
constexpr int kExitConfigError = 2;
constexpr int kExitInternalError = 3;

// ---------------------------------------------------------------------------
// JSON config files: a flat object whose keys are the long option names.

void append_config_value(const Json& value, std::vector<std::string>& inputs) {
  if (value.is_boolean()) {
    inputs.push_back(value.get<bool>() ? "true" : "false");
  } else if (value.is_string()) {
    inputs.push_back(value.get<std::string>());
  } else if (value.is_number()) {
    inputs.push_back(value.dump());
  } else {
    throw std::invalid_argument(
        "config values must be scalars (or arrays of scalars)");
  }
}

/// Merges a JSON config file into an already-parsed subcommand.  Keys are the
/// long option names without the leading dashes; options the user typed on the
/// command line win.  Unknown keys and malformed files abort the run before
/// any work starts, so a bad config never leaves partial artifacts behind.
void apply_config_file(CLI::App* sub, const std::string& path) {
  if (path.empty()) return;
  const Json parsed = qsq::load_json_file(path);
  if (!parsed.is_object()) {
    throw std::invalid_argument("config must be a flat JSON object");
  }
  for (const auto& [key, value] : parsed.items()) {
    CLI::Option* option = sub->get_option_no_throw("--" + key);
    if (option == nullptr) {
      throw std::invalid_argument("config key \"" + key +
                                  "\" does not match any option of this "
                                  "subcommand");
    }
    if (option->count() > 0) continue;  // command line overrides the file
    std::vector<std::string> inputs;
    if (value.is_array()) {
      for (const Json& element : value) append_config_value(element, inputs);
    } else {
      append_config_value(value, inputs);
    }
    for (const std::string& input : inputs) option->add_result(input);
    option->run_callback();
  }
}

// ---------------------------------------------------------------------------
// Shared plumbing

/// Relative artifact paths land in $QSQ_OUTPUT_DIR when it is set.
std::string resolve_artifact_path(const std::string& path) {
  if (path.empty()) return path;
  const std::filesystem::path p(path);
  if (p.is_absolute()) return path;
  const char* dir = std::getenv("QSQ_OUTPUT_DIR");
  if (dir == nullptr || *dir == '\0') return path;
  return (std::filesystem::path(dir) / p).string();
}

/// Runs body(0..count-1) on a small thread pool.  Trials only write their own
/// result slot, so the outcome is independent of the worker count.
template <typename Body>
void for_each_trial(std::size_t count, std::size_t workers, Body&& body) {
  if (count == 0) return;
  if (workers == 0) {
    const unsigned hw = std::thread::hardware_concurrency();
    workers = hw == 0 ? 1 : hw;
  }
  workers = std::min(workers, count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr first_error;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        body(i);
      } catch (...) {
        const std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

struct RunIo {
  std::string out;
  std::string csv;
  std::string config_file;
  std::size_t workers = 0;
};

struct SeedOption {
  std::uint64_t value = 0;
  CLI::Option* option = nullptr;
};

void add_common_options(CLI::App* sub, SeedOption& seed, RunIo& io,
                        bool with_csv) {
  seed.option = sub->add_option(
      "--seed", seed.value, "seed for every random draw in this run");
  sub->add_option("--out", io.out,
                  "also write the JSON report to this file "
                  "(relative paths resolve under $QSQ_OUTPUT_DIR)");
  if (with_csv) {
    sub->add_option("--csv", io.csv, "write the per-trial CSV trace here");
  }
  sub->add_option("--workers", io.workers,
                  "worker threads for --trials (0 = auto; never changes "
                  "results)");
  sub->add_option("--config", io.config_file,
                  "JSON file of flag defaults (command-line flags win)");
}

void require_seed_if(bool stochastic, const SeedOption& seed) {
  if (stochastic && seed.option->count() == 0) {
    throw std::invalid_argument("--seed is required for stochastic runs");
  }
}

void require_positive_trials(std::size_t trials) {
  if (trials == 0) throw std::invalid_argument("--trials must be positive");
}

Json make_report(const char* subcommand, Json config, Json result, bool pass) {
  return Json{{"version", std::string(qsq::kVersion)},
              {"subcommand", subcommand},
              {"config", std::move(config)},
              {"result", std::move(result)},
              {"pass", pass}};
}

/// Prints the report, writes requested artifacts, maps the predicate to the
/// exit code.  Nothing is written before this point, so failed runs leave no
/// partial artifacts.
int emit(const Json& report, bool pass, const RunIo& io,
         const std::string& csv_text = "") {
  std::cout << report.dump(2) << "\n";
  if (!io.out.empty()) {
    qsq::save_json_file(resolve_artifact_path(io.out), report);
  }
  if (!io.csv.empty() && !csv_text.empty()) {
    qsq::save_text_file(resolve_artifact_path(io.csv), csv_text);
  }
  return pass ? kExitSuccess : kExitPredicateFailed;
}

// ---------------------------------------------------------------------------
// Random experiment instances (the library draws concepts; the runner also
// needs raw functions and projector patterns).

qsq::BooleanFunction random_table_function(int n, qsq::RandomStream& rng) {
  return qsq::BooleanFunction::from_function(
      n, [&rng](std::uint32_t) { return rng.bernoulli(0.5) ? 1 : -1; });
}

qsq::SubsetPattern random_projector_pattern(int n, qsq::RandomStream& rng) {
  const auto ones =
      static_cast<qsq::SetIndex>(rng.uniform_below(qsq::table_size(n)));
  const auto zeros =
      static_cast<qsq::SetIndex>(rng.uniform_below(qsq::table_size(n))) &
      static_cast<qsq::SetIndex>(~ones);
  return qsq::SubsetPattern(n, ones, zeros);
}

/// Sign of a few strong random characters plus small pointwise noise: a
/// function whose spectrum has known heavy entries, for exercising the
/// heavy-coefficient search.
qsq::BooleanFunction planted_heavy_function(int n, int planted,
                                            qsq::RandomStream& rng) {
  std::vector<qsq::SetIndex> sets;
  std::vector<double> weights;
  while (static_cast<int>(sets.size()) < planted) {
    const auto s =
        static_cast<qsq::SetIndex>(rng.uniform_below(qsq::table_size(n)));
    if (std::find(sets.begin(), sets.end(), s) != sets.end()) continue;
    sets.push_back(s);
    weights.push_back((rng.bernoulli(0.5) ? 1.0 : -1.0) *
                      rng.uniform_in(0.4, 1.0));
  }
  return qsq::BooleanFunction::from_function(n, [&](std::uint32_t x) {
    double sum = rng.uniform_in(-0.25, 0.25);
    for (std::size_t j = 0; j < sets.size(); ++j) {
      sum += weights[j] * qsq::parity_character(sets[j], x);
    }
    return qsq::sign_of(sum);
  });
}

/// Oracle answer policy shared by the learner subcommands.
struct ModelChoice {
  std::string name = "exact";   // exact | grid | sampling
  double grid_tau = 0.0;        // 0 = track each query's tolerance
  std::size_t copies = 4096;    // sampling model only
};

void add_model_options(CLI::App* sub, ModelChoice& model) {
  sub->add_option("--model", model.name,
                  "oracle answer policy: exact, grid (worst-case legal "
                  "rounding), or sampling (measured copies)")
      ->check(CLI::IsMember({"exact", "grid", "sampling"}));
  sub->add_option("--model-tau", model.grid_tau,
                  "fixed grid spacing /2 for --model grid (0 tracks each "
                  "query's tolerance)");
  sub->add_option("--copies", model.copies,
                  "measured copies per query for --model sampling");
}

qsq::ToleranceModel make_model(const ModelChoice& model,
                               qsq::RandomStream& rng) {
  if (model.name == "exact") return qsq::ExactModel{};
  if (model.name == "grid") {
    if (model.grid_tau > 0.0) return qsq::GridAdversaryModel{model.grid_tau};
    return qsq::GridAdversaryModel{};
  }
  if (model.name == "sampling") {
    return qsq::SamplingModel{model.copies, rng.next_u64()};
  }
  throw std::invalid_argument("unknown tolerance model: " + model.name);
}

Json model_config(const ModelChoice& model) {
  return Json{{"model", model.name},
              {"model_tau", model.grid_tau},
              {"copies", model.copies}};
}

/// Query ledger of one oracle as CSV text.
std::string ledger_csv(const qsq::QueryLog& log) {
  std::ostringstream out;
  log.write_csv(out);
  return out.str();
}

/// Loads either an explicit concept-class file or the built-in parity family.
qsq::ConceptClassTable load_concept_class(const std::string& class_file,
                                          int parity_n) {
  if (!class_file.empty() && parity_n > 0) {
    throw std::invalid_argument("give either --class or --parity-n, not both");
  }
  if (!class_file.empty()) {
    return qsq::concept_class_from_json(qsq::load_json_file(class_file));
  }
  if (parity_n > 0) return qsq::ConceptClassTable::parities(parity_n);
  throw std::invalid_argument("a concept class is required: --class FILE or "
                              "--parity-n N");
}

qsq::Distribution load_distribution(const std::string& dist_file, int n) {
  if (dist_file.empty()) return qsq::Distribution::uniform(n);
  return qsq::distribution_from_json(qsq::load_json_file(dist_file), n);
}

// ---------------------------------------------------------------------------
// learn-parity

struct LearnParityParams {
  int n = 8;
  std::int64_t target_s = -1;  // -1: fresh random target per trial
  std::size_t trials = 1;
  double min_success_rate = 1.0;
  ModelChoice model;
};

int run_learn_parity(const LearnParityParams& p, const SeedOption& seed,
                     const RunIo& io) {
  qsq::check_dimension(p.n);
  const bool random_target = p.target_s < 0;
  if (!random_target &&
      static_cast<std::size_t>(p.target_s) >= qsq::table_size(p.n)) {
    throw std::invalid_argument("--target-s does not fit in n coordinates");
  }
  require_seed_if(random_target || p.model.name == "sampling", seed);
  require_positive_trials(p.trials);

  struct Outcome {
    qsq::SetIndex target = 0;
    qsq::SetIndex recovered = 0;
    std::size_t queries = 0;
    bool success = false;
  };
  std::vector<Outcome> outcomes(p.trials);
  std::string trace;
  for_each_trial(p.trials, io.workers, [&](std::size_t t) {
    qsq::RandomStream rng =
        qsq::RandomStream::derive(seed.value, "learn-parity", t);
    const qsq::SetIndex target =
        random_target ? qsq::random_parity(p.n, rng).s
                      : static_cast<qsq::SetIndex>(p.target_s);
    qsq::QstatOracle oracle(
        qsq::ExampleSpec::noiseless_uniform(
            qsq::BooleanFunction::parity(p.n, target)),
        make_model(p.model, rng));
    const qsq::LearnerReport report = qsq::learn_parity(oracle, p.n);
    const qsq::SetIndex recovered = report.hypothesis.entries().front().set;
    outcomes[t] = Outcome{target, recovered, report.queries_used,
                          recovered == target &&
                              report.queries_used ==
                                  static_cast<std::size_t>(p.n)};
    if (t == 0) trace = ledger_csv(oracle.log());
  });

  std::size_t successes = 0;
  Json per_trial = Json::array();
  for (std::size_t t = 0; t < p.trials; ++t) {
    const Outcome& o = outcomes[t];
    successes += o.success ? 1 : 0;
    per_trial.push_back(Json{{"trial", t},
                             {"target_s", o.target},
                             {"recovered_s", o.recovered},
                             {"queries", o.queries},
                             {"success", o.success}});
  }
  const double rate =
      static_cast<double>(successes) / static_cast<double>(p.trials);
  const bool pass = rate >= p.min_success_rate - 1e-12;

  Json config{{"n", p.n},
              {"target_s", p.target_s},
              {"trials", p.trials},
              {"min_success_rate", p.min_success_rate},
              {"seed", seed.value}};
  config.update(model_config(p.model));
  Json result{{"trials", p.trials},
              {"successes", successes},
              {"success_rate", rate},
              {"per_trial", std::move(per_trial)}};
  return emit(make_report("learn-parity", std::move(config),
                          std::move(result), pass),
              pass, io, trace);
}

// ---------------------------------------------------------------------------
// learn-junta

struct LearnJuntaParams {
  int n = 12;
  int k = 4;
  double epsilon = 0.1;
  std::size_t trials = 1;
  double min_success_rate = 1.0;
  ModelChoice model;
};

int run_learn_junta(const LearnJuntaParams& p, const SeedOption& seed,
                    const RunIo& io) {
  qsq::check_dimension(p.n);
  require_seed_if(true, seed);
  require_positive_trials(p.trials);
  const qsq::Distribution uniform = qsq::Distribution::uniform(p.n);

  struct Outcome {
    double error = 0.0;
    std::size_t queries = 0;
    std::size_t coefficient_queries = 0;
    bool success = false;
  };
  std::vector<Outcome> outcomes(p.trials);
  std::string trace;
  for_each_trial(p.trials, io.workers, [&](std::size_t t) {
    qsq::RandomStream rng =
        qsq::RandomStream::derive(seed.value, "learn-junta", t);
    const qsq::JuntaConcept target = qsq::random_junta(p.n, p.k, rng);
    const qsq::BooleanFunction table = qsq::to_boolean_function(target);
    qsq::QstatOracle oracle(qsq::ExampleSpec::noiseless_uniform(table),
                            make_model(p.model, rng));
    const qsq::LearnerReport report =
        qsq::learn_junta(oracle, p.n, p.k, p.epsilon);
    const double error =
        qsq::error_rate(report.hypothesis, table, uniform);
    std::size_t coefficient_queries = 0;
    for (const qsq::PhaseCount& phase : report.phases) {
      if (phase.name == "coefficients") coefficient_queries = phase.queries;
    }
    outcomes[t] = Outcome{error, report.queries_used, coefficient_queries,
                          error <= p.epsilon};
    if (t == 0) trace = ledger_csv(oracle.log());
  });

  std::size_t successes = 0;
  double worst_error = 0.0;
  Json per_trial = Json::array();
  for (std::size_t t = 0; t < p.trials; ++t) {
    const Outcome& o = outcomes[t];
    successes += o.success ? 1 : 0;
    worst_error = std::max(worst_error, o.error);
    per_trial.push_back(Json{{"trial", t},
                             {"error_rate", o.error},
                             {"queries", o.queries},
                             {"coefficient_queries", o.coefficient_queries},
                             {"success", o.success}});
  }
  const double rate =
      static_cast<double>(successes) / static_cast<double>(p.trials);
  const bool pass = rate >= p.min_success_rate - 1e-12;

  Json config{{"n", p.n},
              {"k", p.k},
              {"epsilon", p.epsilon},
              {"trials", p.trials},
              {"min_success_rate", p.min_success_rate},
              {"seed", seed.value}};
  config.update(model_config(p.model));
  Json result{{"trials", p.trials},
              {"successes", successes},
              {"success_rate", rate},
              {"worst_error", worst_error},
              {"per_trial", std::move(per_trial)}};
  return emit(make_report("learn-junta", std::move(config), std::move(result),
                          pass),
              pass, io, trace);
}

// ---------------------------------------------------------------------------
// gl (heavy Fourier coefficients)

struct GlParams {
  int n = 10;
  double tau = 0.2;
  int planted = 3;
  std::string function_file;
  std::size_t trials = 1;
  double min_success_rate = 1.0;
  ModelChoice model;
};

int run_gl(const GlParams& p, const SeedOption& seed, const RunIo& io) {
  const bool random_target = p.function_file.empty();
  require_seed_if(random_target || p.model.name == "sampling", seed);
  require_positive_trials(p.trials);
  std::optional<qsq::BooleanFunction> fixed;
  int n = p.n;
  if (!random_target) {
    fixed = qsq::function_from_json(qsq::load_json_file(p.function_file));
    n = fixed->dimension();
  }
  qsq::check_dimension(n);

  struct Outcome {
    std::vector<qsq::SetIndex> found;
    std::vector<qsq::SetIndex> missing;
    std::vector<qsq::SetIndex> spurious;
    std::size_t queries = 0;
    bool success = false;
  };
  std::vector<Outcome> outcomes(p.trials);
  std::string trace;
  for_each_trial(p.trials, io.workers, [&](std::size_t t) {
    qsq::RandomStream rng = qsq::RandomStream::derive(seed.value, "gl", t);
    const qsq::BooleanFunction f =
        fixed ? *fixed : planted_heavy_function(n, p.planted, rng);
    qsq::QstatOracle oracle(qsq::ExampleSpec::noiseless_uniform(f),
                            make_model(p.model, rng));
    qsq::GoldreichLevinStats stats;
    Outcome o;
    o.found = qsq::goldreich_levin(oracle, n, p.tau, &stats);
    o.queries = stats.bucket_queries + stats.confirmation_queries;
    const qsq::FourierSpectrum spectrum = qsq::walsh_hadamard_transform(f);
    for (qsq::SetIndex s = 0; s < qsq::table_size(n); ++s) {
      const bool listed =
          std::binary_search(o.found.begin(), o.found.end(), s);
      const double magnitude = std::abs(spectrum.coefficient(s));
      if (magnitude >= p.tau && !listed) o.missing.push_back(s);
      if (listed && magnitude < p.tau / 2.0) o.spurious.push_back(s);
    }
    o.success = o.missing.empty() && o.spurious.empty();
    outcomes[t] = std::move(o);
    if (t == 0) trace = ledger_csv(oracle.log());
  });

  std::size_t successes = 0;
  Json per_trial = Json::array();
  for (std::size_t t = 0; t < p.trials; ++t) {
    const Outcome& o = outcomes[t];
    successes += o.success ? 1 : 0;
    per_trial.push_back(Json{{"trial", t},
                             {"found", o.found},
                             {"missing", o.missing},
                             {"spurious", o.spurious},
                             {"queries", o.queries},
                             {"success", o.success}});
  }
  const double rate =
      static_cast<double>(successes) / static_cast<double>(p.trials);
  const bool pass = rate >= p.min_success_rate - 1e-12;

  Json config{{"n", n},
              {"tau", p.tau},
              {"planted", p.planted},
              {"function", p.function_file},
              {"trials", p.trials},
              {"min_success_rate", p.min_success_rate},
              {"seed", seed.value}};
  config.update(model_config(p.model));
  Json result{{"trials", p.trials},
              {"successes", successes},
              {"success_rate", rate},
              {"per_trial", std::move(per_trial)}};
  return emit(make_report("gl", std::move(config), std::move(result), pass),
              pass, io, trace);
}

// ---------------------------------------------------------------------------
// learn-dnf

struct LearnDnfParams {
  int n = 10;
  int terms = 4;
  double epsilon = 0.15;
  double literal_prob = 0.3;
  std::size_t trials = 1;
  double min_success_rate = 0.9;
  ModelChoice model;
};

int run_learn_dnf(const LearnDnfParams& p, const SeedOption& seed,
                  const RunIo& io) {
  qsq::check_dimension(p.n);
  require_seed_if(true, seed);
  require_positive_trials(p.trials);
  const qsq::Distribution uniform = qsq::Distribution::uniform(p.n);

  struct Outcome {
    double error = 0.0;
    std::size_t queries = 0;
    bool success = false;
  };
  std::vector<Outcome> outcomes(p.trials);
  std::string trace;
  for_each_trial(p.trials, io.workers, [&](std::size_t t) {
    qsq::RandomStream rng =
        qsq::RandomStream::derive(seed.value, "learn-dnf", t);
    const qsq::DnfConcept target =
        qsq::random_dnf(p.n, p.terms, p.literal_prob, rng);
    const qsq::BooleanFunction table = qsq::to_boolean_function(target);
    qsq::QstatOracle oracle(qsq::ExampleSpec::noiseless_uniform(table),
                            make_model(p.model, rng));
    const qsq::LearnerReport report =
        qsq::learn_dnf(oracle, p.n, p.terms, p.epsilon);
    const double error =
        qsq::error_rate(report.hypothesis, table, uniform);
    outcomes[t] = Outcome{error, report.queries_used, error <= p.epsilon};
    if (t == 0) trace = ledger_csv(oracle.log());
  });

  std::size_t successes = 0;
  double worst_error = 0.0;
  Json per_trial = Json::array();
  for (std::size_t t = 0; t < p.trials; ++t) {
    const Outcome& o = outcomes[t];
    successes += o.success ? 1 : 0;
    worst_error = std::max(worst_error, o.error);
    per_trial.push_back(Json{{"trial", t},
                             {"error_rate", o.error},
                             {"queries", o.queries},
                             {"success", o.success}});
  }
  const double rate =
      static_cast<double>(successes) / static_cast<double>(p.trials);
  const bool pass = rate >= p.min_success_rate - 1e-12;

  Json config{{"n", p.n},
              {"terms", p.terms},
              {"epsilon", p.epsilon},
              {"literal_prob", p.literal_prob},
              {"trials", p.trials},
              {"min_success_rate", p.min_success_rate},
              {"seed", seed.value}};
  config.update(model_config(p.model));
  Json result{{"trials", p.trials},
              {"successes", successes},
              {"success_rate", rate},
              {"worst_error", worst_error},
              {"per_trial", std::move(per_trial)}};
  return emit(make_report("learn-dnf", std::move(config), std::move(result),
                          pass),
              pass, io, trace);
}

// ---------------------------------------------------------------------------
// sim-qstat / sim-noisy

struct SimParams {
  int n = 8;
  double tau = 0.1;
  double delta = 0.05;          // per-query failure share
  double eta = 0.0;             // sim-noisy only
  std::size_t trials = 100;
  double max_violation_rate = -1.0;  // <0: delta + 0.025 slack
};

int run_sim(const SimParams& p, bool noisy, const SeedOption& seed,
            const RunIo& io) {
  qsq::check_dimension(p.n);
  require_seed_if(true, seed);
  require_positive_trials(p.trials);
  const char* name = noisy ? "sim-noisy" : "sim-qstat";
  const std::size_t copies_per_query =
      noisy ? qsq::noisy_qstat_copy_count(p.tau, p.eta, p.delta)
            : qsq::qstat_copy_count(p.tau, p.delta);

  std::vector<qsq::SimulationTrialRow> rows(p.trials);
  for_each_trial(p.trials, io.workers, [&](std::size_t t) {
    qsq::RandomStream rng = qsq::RandomStream::derive(seed.value, name, t);
    const qsq::BooleanFunction f = random_table_function(p.n, rng);
    const qsq::Observable m =
        qsq::fourier_mass_observable(random_projector_pattern(p.n, rng));
    const qsq::ExampleSpec noiseless =
        qsq::ExampleSpec::noiseless_uniform(f);
    qsq::QstatSimulation sim;
    if (noisy) {
      const qsq::ExampleSpec spec(f, qsq::Distribution::uniform(p.n), p.eta);
      sim = qsq::simulate_noisy_qstat(spec, m, p.tau, p.delta,
                                      rng.next_u64());
    } else {
      sim = qsq::simulate_qstat(noiseless, m, p.tau, p.delta, rng.next_u64());
    }
    rows[t] = qsq::SimulationTrialRow{t, sim.copies, sim.alpha,
                                      qsq::exact_expectation(noiseless, m)};
  });

  std::size_t violations = 0;
  double max_abs_error = 0.0;
  for (const qsq::SimulationTrialRow& r : rows) {
    const double abs_error = std::abs(r.alpha - r.exact);
    max_abs_error = std::max(max_abs_error, abs_error);
    if (abs_error > p.tau) ++violations;
  }
  const double rate =
      static_cast<double>(violations) / static_cast<double>(p.trials);
  const double allowed =
      p.max_violation_rate >= 0.0 ? p.max_violation_rate : p.delta + 0.025;
  const bool pass = rate <= allowed + 1e-12;

  Json config{{"n", p.n},
              {"tau", p.tau},
              {"delta", p.delta},
              {"trials", p.trials},
              {"max_violation_rate", allowed},
              {"seed", seed.value}};
  if (noisy) config["eta"] = p.eta;
  const Json result{{"trials", p.trials},
                    {"copies_per_query", copies_per_query},
                    {"violations", violations},
                    {"violation_rate", rate},
                    {"max_abs_error", max_abs_error}};
  return emit(make_report(name, std::move(config), result, pass), pass, io,
              qsq::simulation_trials_csv(rows, p.tau));
}

// ---------------------------------------------------------------------------
// sqdim

struct SqdimParams {
  std::string class_file;
  int parity_n = 0;
  std::string dist_file;
  std::int64_t expect_d = -1;
};

int run_sqdim(const SqdimParams& p, const RunIo& io) {
  const qsq::ConceptClassTable cls =
      load_concept_class(p.class_file, p.parity_n);
  const qsq::Distribution dist =
      load_distribution(p.dist_file, cls.dimension());
  const qsq::SqdimResult r = qsq::weak_sqdim(cls, dist);
  const bool pass =
      p.expect_d < 0 || r.dimension == static_cast<std::size_t>(p.expect_d);
  const Json config{{"class", p.class_file},
                    {"parity_n", p.parity_n},
                    {"dist", p.dist_file.empty() ? "uniform" : p.dist_file},
                    {"expect_d", p.expect_d}};
  return emit(make_report("sqdim", config, qsq::sqdim_result_to_json(r), pass),
              pass, io);
}

// ---------------------------------------------------------------------------
// adversary-game

struct AdversaryGameParams {
  std::string class_file;
  int parity_n = 8;
  std::string dist_file;
  double tau = 1.0 / 12.0;
  double error_target = 0.01;
  std::string learner = "parity";  // parity | truncated | none
  std::size_t max_queries = 2;     // truncated learner only
};

int run_adversary_game(const AdversaryGameParams& p, const RunIo& io) {
  const qsq::ConceptClassTable cls =
      load_concept_class(p.class_file, p.class_file.empty() ? p.parity_n : 0);
  const qsq::Distribution dist =
      load_distribution(p.dist_file, cls.dimension());
  const int n = cls.dimension();

  auto launch = [&](auto&& learner) {
    return qsq::run_lower_bound_game(learner, cls, dist, p.tau,
                                     p.error_target);
  };
  qsq::GameReport report = [&] {
    if (p.learner == "parity") {
      return launch([n](qsq::AdversaryOracle& oracle) {
        return qsq::learn_parity(oracle, n).hypothesis;
      });
    }
    if (p.learner == "truncated") {
      const std::size_t budget = p.max_queries;
      return launch([n, budget](qsq::AdversaryOracle& oracle) {
        qsq::SetIndex s = 0;
        for (int i = 0; i < n && static_cast<std::size_t>(i) < budget; ++i) {
          const double answer = oracle.qstat(
              qsq::fourier_mass_observable(
                  qsq::SubsetPattern::influence_of(n, i)),
              1.0 / 6.0);
          if (2.0 * answer >= 0.5) s |= qsq::SetIndex{1} << i;
        }
        return qsq::Hypothesis::parity(n, s);
      });
    }
    if (p.learner == "none") {
      return launch([n](qsq::AdversaryOracle&) {
        return qsq::Hypothesis::parity(n, 0);
      });
    }
    throw std::invalid_argument("unknown game learner: " + p.learner);
  }();

  // A full learner must beat the error target; a query-starved one is only
  // required to leave the information bound intact (enough candidates stay
  // alive to force ambiguity).
  const bool pass = report.information_bound_respected &&
                    (p.learner != "parity" || report.met_target);
  const Json config{{"class", p.class_file},
                    {"parity_n", p.class_file.empty() ? p.parity_n : 0},
                    {"dist", p.dist_file.empty() ? "uniform" : p.dist_file},
                    {"tau", p.tau},
                    {"error_target", p.error_target},
                    {"learner", p.learner},
                    {"max_queries", p.max_queries}};
  return emit(
      make_report("adversary-game", config, qsq::game_report_to_json(report),
                  pass),
      pass, io, qsq::game_transcript_csv(report));
}

// ---------------------------------------------------------------------------
// protocol

struct ProtocolParams {
  int n = 8;
  double tau = 1.0 / 6.0;
  double gamma = 0.49;
  std::size_t trials = 500;
  std::string dist_file;  // Bob's input distribution
};

int run_protocol_command(const ProtocolParams& p, const SeedOption& seed,
                         const RunIo& io) {
  qsq::check_dimension(p.n);
  require_seed_if(true, seed);
  require_positive_trials(p.trials);
  const qsq::ConceptClassTable cls = qsq::ConceptClassTable::parities(p.n);
  const std::vector<double> mu1(
      cls.size(), 1.0 / static_cast<double>(cls.size()));
  const qsq::Distribution mu2 = load_distribution(p.dist_file, p.n);
  const int n = p.n;
  const qsq::ProtocolResult result = qsq::run_protocol(
      cls, mu1, mu2, p.tau, p.gamma,
      [n](qsq::AliceOracle& oracle) {
        return qsq::learn_parity(oracle, n).hypothesis;
      },
      p.trials, seed.value);
  const bool pass =
      result.every_answer_legal && result.success >= 0.5 + p.gamma - 1e-12;
  const Json config{{"n", p.n},
                    {"tau", p.tau},
                    {"gamma", p.gamma},
                    {"trials", p.trials},
                    {"dist", p.dist_file.empty() ? "uniform" : p.dist_file},
                    {"seed", seed.value}};
  return emit(make_report("protocol", config,
                          qsq::protocol_result_to_json(result), pass),
              pass, io);
}

// ---------------------------------------------------------------------------
// private-learn

struct PrivateLearnParams {
  int n = 8;
  double tau = 1.0 / 6.0;
  double alpha = 0.5;
  double delta = 0.05;
  std::size_t trials = 1;
  double min_success_rate = 0.9;
};

int run_private_learn(const PrivateLearnParams& p, const SeedOption& seed,
                      const RunIo& io) {
  qsq::check_dimension(p.n);
  require_seed_if(true, seed);
  require_positive_trials(p.trials);

  struct Outcome {
    qsq::SetIndex target = 0;
    qsq::SetIndex recovered = 0;
    bool success = false;
    std::size_t samples_per_query = 0;
    std::size_t total_samples = 0;
    std::vector<double> noise_trace;
  };
  std::vector<Outcome> outcomes(p.trials);
  const int n = p.n;
  for_each_trial(p.trials, io.workers, [&](std::size_t t) {
    qsq::RandomStream rng =
        qsq::RandomStream::derive(seed.value, "private-learn", t);
    const qsq::SetIndex target = qsq::random_parity(p.n, rng).s;
    const qsq::PrivateLearnReport report = qsq::private_pac_learn(
        qsq::ExampleSpec::noiseless_uniform(
            qsq::BooleanFunction::parity(p.n, target)),
        p.tau, static_cast<std::size_t>(p.n), p.alpha, p.delta,
        [n](qsq::PrivateQstatOracle& oracle) {
          return qsq::learn_parity(oracle, n).hypothesis;
        },
        rng.next_u64());
    const qsq::SetIndex recovered = report.hypothesis.entries().front().set;
    outcomes[t] = Outcome{target,
                          recovered,
                          recovered == target,
                          report.samples_per_query,
                          report.total_samples,
                          report.noise_trace};
  });

  std::size_t successes = 0;
  Json per_trial = Json::array();
  for (std::size_t t = 0; t < p.trials; ++t) {
    const Outcome& o = outcomes[t];
    successes += o.success ? 1 : 0;
    per_trial.push_back(Json{{"trial", t},
                             {"target_s", o.target},
                             {"recovered_s", o.recovered},
                             {"success", o.success},
                             {"noise_trace", o.noise_trace}});
  }
  const double rate =
      static_cast<double>(successes) / static_cast<double>(p.trials);
  const bool pass = rate >= p.min_success_rate - 1e-12;

  const Json config{{"n", p.n},
                    {"tau", p.tau},
                    {"alpha", p.alpha},
                    {"delta", p.delta},
                    {"trials", p.trials},
                    {"min_success_rate", p.min_success_rate},
                    {"seed", seed.value}};
  const Json result{{"trials", p.trials},
                    {"successes", successes},
                    {"success_rate", rate},
                    {"queries", p.n},
                    {"samples_per_query", outcomes.front().samples_per_query},
                    {"total_samples", outcomes.front().total_samples},
                    {"per_trial", per_trial}};
  return emit(make_report("private-learn", config, result, pass), pass, io);
}

// ---------------------------------------------------------------------------
// dp-audit

struct DpAuditParams {
  double alpha = 0.5;
  std::size_t tuple_size = 100;
  std::size_t samples = 200000;
  std::size_t bins = 400;
  double lo = -0.5;
  double hi = 1.5;
  std::string mechanism = "private-average";  // or bare-average
};

int run_dp_audit(const DpAuditParams& p, const SeedOption& seed,
                 const RunIo& io) {
  require_seed_if(true, seed);
  if (p.tuple_size == 0) {
    throw std::invalid_argument("--tuple-size must be positive");
  }
  // Worst-case neighboring inputs: one entry moves across the full range
  // allowed by the mechanism, which accepts values in [0, 1].
  std::vector<double> tuple_a(p.tuple_size, 0.0);
  std::vector<double> tuple_b = tuple_a;
  tuple_b[0] = 1.0;

  auto make_mechanism = [&](std::vector<double> values) {
    const bool noiseless = p.mechanism == "bare-average";
    const double alpha = p.alpha;
    return [values = std::move(values), alpha,
            noiseless](qsq::RandomStream& rng) {
      if (noiseless) {
        double sum = 0.0;
        for (double v : values) sum += v;
        return sum / static_cast<double>(values.size());
      }
      return qsq::private_average(values, alpha, rng);
    };
  };
  if (p.mechanism != "private-average" && p.mechanism != "bare-average") {
    throw std::invalid_argument("unknown mechanism: " + p.mechanism);
  }
  const qsq::DpAuditReport report =
      qsq::dp_audit(make_mechanism(tuple_a), make_mechanism(tuple_b), p.alpha,
                    p.lo, p.hi, p.bins, p.samples, seed.value);
  const bool pass = report.pass;
  const Json config{{"alpha", p.alpha},
                    {"tuple_size", p.tuple_size},
                    {"samples", p.samples},
                    {"bins", p.bins},
                    {"lo", p.lo},
                    {"hi", p.hi},
                    {"mechanism", p.mechanism},
                    {"seed", seed.value}};
  return emit(make_report("dp-audit", config,
                          qsq::dp_audit_report_to_json(report), pass),
              pass, io);
}

// ---------------------------------------------------------------------------
// spectrum

struct SpectrumParams {
  std::string function_file;
  std::string bits_file;
  int n = 0;
  std::int64_t parity_s = -1;
  bool random = false;
  double threshold = 0.0;
  std::string spectrum_out;
};

int run_spectrum(const SpectrumParams& p, const SeedOption& seed,
                 const RunIo& io) {
  const int sources = (p.function_file.empty() ? 0 : 1) +
                      (p.bits_file.empty() ? 0 : 1) +
                      (p.parity_s >= 0 ? 1 : 0) + (p.random ? 1 : 0);
  if (sources != 1) {
    throw std::invalid_argument(
        "give exactly one input: --function, --bits, --parity-s, or "
        "--random");
  }
  require_seed_if(p.random, seed);

  qsq::BooleanFunction f = [&] {
    if (!p.function_file.empty()) {
      return qsq::function_from_json(qsq::load_json_file(p.function_file));
    }
    qsq::check_dimension(p.n);  // the remaining sources need --n
    if (!p.bits_file.empty()) {
      return qsq::load_bitstring_file(p.bits_file, p.n);
    }
    if (p.parity_s >= 0) {
      return qsq::BooleanFunction::parity(
          p.n, static_cast<qsq::SetIndex>(p.parity_s));
    }
    qsq::RandomStream rng =
        qsq::RandomStream::derive(seed.value, "spectrum", 0);
    return random_table_function(p.n, rng);
  }();

  const qsq::FourierSpectrum spectrum = qsq::walsh_hadamard_transform(f);
  Json heavy = Json::array();
  if (p.threshold > 0.0) {
    for (qsq::SetIndex s = 0; s < qsq::table_size(f.dimension()); ++s) {
      if (std::abs(spectrum.coefficient(s)) >= p.threshold) {
        heavy.push_back(
            Json{{"set", s}, {"coeff", spectrum.coefficient(s)}});
      }
    }
  }
  const double total_mass = spectrum.total_mass();
  const bool pass = std::abs(total_mass - 1.0) <= 1e-9;

  if (!p.spectrum_out.empty()) {
    qsq::save_json_file(resolve_artifact_path(p.spectrum_out),
                        qsq::spectrum_to_json(spectrum));
  }
  const Json config{{"function", p.function_file},
                    {"bits", p.bits_file},
                    {"n", f.dimension()},
                    {"parity_s", p.parity_s},
                    {"random", p.random},
                    {"threshold", p.threshold},
                    {"seed", seed.value}};
  const Json result{{"n", f.dimension()},
                    {"total_mass", total_mass},
                    {"spectrum", qsq::spectrum_to_json(spectrum)},
                    {"heavy", heavy}};
  return emit(make_report("spectrum", config, result, pass), pass, io);
}

// ---------------------------------------------------------------------------
// Wiring

int dispatch(int argc, char** argv) {
  CLI::App app{"qsq: statistical-query learning on quantum examples"};
  app.set_version_flag("--version", std::string(qsq::kVersion));
  app.require_subcommand(1);

  LearnParityParams parity;
  SeedOption parity_seed;
  RunIo parity_io;
  CLI::App* parity_cmd = app.add_subcommand(
      "learn-parity", "recover a hidden parity from influence queries");
  parity_cmd->add_option("--n", parity.n, "number of coordinates")
      ->check(CLI::Range(1, qsq::kMaxDimension));
  parity_cmd->add_option("--target-s", parity.target_s,
                         "fixed target set mask (default: random per trial)");
  parity_cmd->add_option("--trials", parity.trials, "independent runs");
  parity_cmd->add_option("--min-success-rate", parity.min_success_rate,
                         "acceptance threshold on the success fraction");
  add_model_options(parity_cmd, parity.model);
  add_common_options(parity_cmd, parity_seed, parity_io, true);

  LearnJuntaParams junta;
  SeedOption junta_seed;
  RunIo junta_io;
  CLI::App* junta_cmd = app.add_subcommand(
      "learn-junta", "learn a random k-junta to target error");
  junta_cmd->add_option("--n", junta.n, "number of coordinates")
      ->check(CLI::Range(1, qsq::kMaxDimension));
  junta_cmd->add_option("--k", junta.k, "junta arity");
  junta_cmd->add_option("--epsilon", junta.epsilon, "target error rate");
  junta_cmd->add_option("--trials", junta.trials, "independent runs");
  junta_cmd->add_option("--min-success-rate", junta.min_success_rate,
                        "acceptance threshold on the success fraction");
  add_model_options(junta_cmd, junta.model);
  add_common_options(junta_cmd, junta_seed, junta_io, true);

  GlParams gl;
  SeedOption gl_seed;
  RunIo gl_io;
  CLI::App* gl_cmd = app.add_subcommand(
      "gl", "list every heavy Fourier coefficient of a function");
  gl_cmd->add_option("--n", gl.n, "number of coordinates (random targets)")
      ->check(CLI::Range(1, qsq::kMaxDimension));
  gl_cmd->add_option("--tau", gl.tau, "heaviness threshold");
  gl_cmd->add_option("--planted", gl.planted,
                     "planted heavy characters per random target");
  gl_cmd->add_option("--function", gl.function_file,
                     "JSON truth-table file to analyze instead of random "
                     "targets");
  gl_cmd->add_option("--trials", gl.trials, "independent runs");
  gl_cmd->add_option("--min-success-rate", gl.min_success_rate,
                     "acceptance threshold on the success fraction");
  add_model_options(gl_cmd, gl.model);
  add_common_options(gl_cmd, gl_seed, gl_io, true);

  LearnDnfParams dnf;
  SeedOption dnf_seed;
  RunIo dnf_io;
  CLI::App* dnf_cmd = app.add_subcommand(
      "learn-dnf", "learn a random small DNF to target error");
  dnf_cmd->add_option("--n", dnf.n, "number of coordinates")
      ->check(CLI::Range(1, qsq::kMaxDimension));
  dnf_cmd->add_option("--terms", dnf.terms, "DNF term count");
  dnf_cmd->add_option("--epsilon", dnf.epsilon, "target error rate");
  dnf_cmd->add_option("--literal-prob", dnf.literal_prob,
                      "per-variable literal probability for random DNFs");
  dnf_cmd->add_option("--trials", dnf.trials, "independent runs");
  dnf_cmd->add_option("--min-success-rate", dnf.min_success_rate,
                      "acceptance threshold on the success fraction");
  add_model_options(dnf_cmd, dnf.model);
  add_common_options(dnf_cmd, dnf_seed, dnf_io, true);

  SimParams sim_clean;
  SeedOption sim_clean_seed;
  RunIo sim_clean_io;
  CLI::App* sim_clean_cmd = app.add_subcommand(
      "sim-qstat",
      "answer tolerance-tau queries from finitely many measured copies");
  sim_clean_cmd->add_option("--n", sim_clean.n, "number of coordinates")
      ->check(CLI::Range(1, qsq::kMaxDimension));
  sim_clean_cmd->add_option("--tau", sim_clean.tau, "query tolerance");
  sim_clean_cmd->add_option("--delta", sim_clean.delta,
                            "per-query failure probability share");
  sim_clean_cmd->add_option("--trials", sim_clean.trials, "independent runs");
  sim_clean_cmd->add_option("--max-violation-rate",
                            sim_clean.max_violation_rate,
                            "acceptance cap on the violation fraction "
                            "(default: delta + 0.025)");
  add_common_options(sim_clean_cmd, sim_clean_seed, sim_clean_io, true);

  SimParams sim_noisy;
  sim_noisy.tau = 0.2;
  sim_noisy.eta = 0.01;
  SeedOption sim_noisy_seed;
  RunIo sim_noisy_io;
  CLI::App* sim_noisy_cmd = app.add_subcommand(
      "sim-noisy",
      "answer queries about the noiseless state from noisy measured copies");
  sim_noisy_cmd->add_option("--n", sim_noisy.n, "number of coordinates")
      ->check(CLI::Range(1, qsq::kMaxDimension));
  sim_noisy_cmd->add_option("--tau", sim_noisy.tau, "query tolerance");
  sim_noisy_cmd->add_option("--eta", sim_noisy.eta, "label noise rate");
  sim_noisy_cmd->add_option("--delta", sim_noisy.delta,
                            "per-query failure probability share");
  sim_noisy_cmd->add_option("--trials", sim_noisy.trials, "independent runs");
  sim_noisy_cmd->add_option("--max-violation-rate",
                            sim_noisy.max_violation_rate,
                            "acceptance cap on the violation fraction "
                            "(default: delta + 0.025)");
  add_common_options(sim_noisy_cmd, sim_noisy_seed, sim_noisy_io, true);

  SqdimParams sqdim;
  SeedOption sqdim_seed;
  RunIo sqdim_io;
  CLI::App* sqdim_cmd = app.add_subcommand(
      "sqdim", "weak statistical dimension of a concept class");
  sqdim_cmd->add_option("--class", sqdim.class_file,
                        "concept-class JSON file");
  sqdim_cmd->add_option("--parity-n", sqdim.parity_n,
                        "use the built-in parity class on n coordinates")
      ->check(CLI::Range(1, qsq::kMaxDimension));
  sqdim_cmd->add_option("--dist", sqdim.dist_file,
                        "distribution JSON file (default uniform)");
  sqdim_cmd->add_option("--expect-d", sqdim.expect_d,
                        "fail (exit 1) unless the dimension equals this");
  add_common_options(sqdim_cmd, sqdim_seed, sqdim_io, false);

  AdversaryGameParams game;
  SeedOption game_seed;
  RunIo game_io;
  CLI::App* game_cmd = app.add_subcommand(
      "adversary-game",
      "play a learner against the covering adversary oracle");
  game_cmd->add_option("--class", game.class_file, "concept-class JSON file");
  game_cmd->add_option("--parity-n", game.parity_n,
                       "use the built-in parity class on n coordinates")
      ->check(CLI::Range(1, qsq::kMaxDimension));
  game_cmd->add_option("--dist", game.dist_file,
                       "distribution JSON file (default uniform)");
  game_cmd->add_option("--tau", game.tau, "adversary cell half-width");
  game_cmd->add_option("--error-target", game.error_target,
                       "error the learner must beat on every survivor");
  game_cmd->add_option("--learner", game.learner,
                       "parity (full run), truncated (stops early), or none")
      ->check(CLI::IsMember({"parity", "truncated", "none"}));
  game_cmd->add_option("--max-queries", game.max_queries,
                       "query budget for --learner truncated");
  add_common_options(game_cmd, game_seed, game_io, true);

  ProtocolParams protocol;
  SeedOption protocol_seed;
  RunIo protocol_io;
  CLI::App* protocol_cmd = app.add_subcommand(
      "protocol",
      "one-way protocol: quantized oracle answers as a message to Bob");
  protocol_cmd->add_option("--n", protocol.n, "parity class dimension")
      ->check(CLI::Range(1, qsq::kMaxDimension));
  protocol_cmd->add_option("--tau", protocol.tau,
                           "Alice's quantization tolerance");
  protocol_cmd->add_option("--gamma", protocol.gamma,
                           "required advantage over random guessing");
  protocol_cmd->add_option("--trials", protocol.trials,
                           "protocol executions");
  protocol_cmd->add_option("--dist", protocol.dist_file,
                           "Bob's input distribution file (default uniform)");
  add_common_options(protocol_cmd, protocol_seed, protocol_io, false);

  PrivateLearnParams private_learn;
  SeedOption private_seed;
  RunIo private_io;
  CLI::App* private_cmd = app.add_subcommand(
      "private-learn",
      "learn a parity through the differentially private oracle");
  private_cmd->add_option("--n", private_learn.n, "number of coordinates")
      ->check(CLI::Range(1, qsq::kMaxDimension));
  private_cmd->add_option("--tau", private_learn.tau, "query tolerance");
  private_cmd->add_option("--alpha", private_learn.alpha,
                          "privacy parameter");
  private_cmd->add_option("--delta", private_learn.delta,
                          "allowed overall failure probability");
  private_cmd->add_option("--trials", private_learn.trials,
                          "independent runs");
  private_cmd->add_option("--min-success-rate",
                          private_learn.min_success_rate,
                          "acceptance threshold on the success fraction");
  add_common_options(private_cmd, private_seed, private_io, false);

  DpAuditParams audit;
  SeedOption audit_seed;
  RunIo audit_io;
  CLI::App* audit_cmd = app.add_subcommand(
      "dp-audit",
      "histogram audit of the private-average mechanism on neighbor tuples");
  audit_cmd->add_option("--alpha", audit.alpha, "privacy parameter");
  audit_cmd->add_option("--tuple-size", audit.tuple_size,
                        "entries per input tuple");
  audit_cmd->add_option("--samples", audit.samples,
                        "mechanism draws per tuple");
  audit_cmd->add_option("--bins", audit.bins, "histogram bins");
  audit_cmd->add_option("--lo", audit.lo, "histogram lower edge");
  audit_cmd->add_option("--hi", audit.hi, "histogram upper edge");
  audit_cmd->add_option("--mechanism", audit.mechanism,
                        "private-average, or bare-average to show the audit "
                        "catching an unprotected statistic")
      ->check(CLI::IsMember({"private-average", "bare-average"}));
  add_common_options(audit_cmd, audit_seed, audit_io, false);

  SpectrumParams spectrum;
  SeedOption spectrum_seed;
  RunIo spectrum_io;
  CLI::App* spectrum_cmd = app.add_subcommand(
      "spectrum", "dump the full Fourier spectrum of a function");
  spectrum_cmd->add_option("--function", spectrum.function_file,
                           "JSON truth-table file");
  spectrum_cmd->add_option("--bits", spectrum.bits_file,
                           "packed truth-table file (needs --n)");
  spectrum_cmd->add_option("--n", spectrum.n,
                           "dimension for --bits/--parity-s/--random")
      ->check(CLI::Range(1, qsq::kMaxDimension));
  spectrum_cmd->add_option("--parity-s", spectrum.parity_s,
                           "analyze the parity with this set mask");
  spectrum_cmd->add_flag("--random", spectrum.random,
                         "analyze a seeded random function");
  spectrum_cmd->add_option("--threshold", spectrum.threshold,
                           "also list coefficients at least this large");
  spectrum_cmd->add_option("--spectrum-out", spectrum.spectrum_out,
                           "write the raw coefficient array to this file");
  add_common_options(spectrum_cmd, spectrum_seed, spectrum_io, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);  // prints help/version or the error
    return code == 0 ? kExitSuccess : kExitConfigError;
  }

  if (app.got_subcommand(parity_cmd)) {
    apply_config_file(parity_cmd, parity_io.config_file);
    return run_learn_parity(parity, parity_seed, parity_io);
  }
  if (app.got_subcommand(junta_cmd)) {
    apply_config_file(junta_cmd, junta_io.config_file);
    return run_learn_junta(junta, junta_seed, junta_io);
  }
  if (app.got_subcommand(gl_cmd)) {
    apply_config_file(gl_cmd, gl_io.config_file);
    return run_gl(gl, gl_seed, gl_io);
  }
  if (app.got_subcommand(dnf_cmd)) {
    apply_config_file(dnf_cmd, dnf_io.config_file);
    return run_learn_dnf(dnf, dnf_seed, dnf_io);
  }
  if (app.got_subcommand(sim_clean_cmd)) {
    apply_config_file(sim_clean_cmd, sim_clean_io.config_file);
    return run_sim(sim_clean, false, sim_clean_seed, sim_clean_io);
  }
  if (app.got_subcommand(sim_noisy_cmd)) {
    apply_config_file(sim_noisy_cmd, sim_noisy_io.config_file);
    return run_sim(sim_noisy, true, sim_noisy_seed, sim_noisy_io);
  }
  if (app.got_subcommand(sqdim_cmd)) {
    apply_config_file(sqdim_cmd, sqdim_io.config_file);
    return run_sqdim(sqdim, sqdim_io);
  }
  if (app.got_subcommand(game_cmd)) {
    apply_config_file(game_cmd, game_io.config_file);
    return run_adversary_game(game, game_io);
  }
  if (app.got_subcommand(protocol_cmd)) {
    apply_config_file(protocol_cmd, protocol_io.config_file);
    return run_protocol_command(protocol, protocol_seed, protocol_io);
  }
  if (app.got_subcommand(private_cmd)) {
    apply_config_file(private_cmd, private_io.config_file);
    return run_private_learn(private_learn, private_seed, private_io);
  }
  if (app.got_subcommand(audit_cmd)) {
    apply_config_file(audit_cmd, audit_io.config_file);
    return run_dp_audit(audit, audit_seed, audit_io);
  }
  if (app.got_subcommand(spectrum_cmd)) {
    apply_config_file(spectrum_cmd, spectrum_io.config_file);
    return run_spectrum(spectrum, spectrum_seed, spectrum_io);
  }
  throw std::logic_error("no subcommand dispatched after successful parse");
}

void print_error(const char* category, const std::string& message, int code) {
  const Json report{{"error", message}, {"category", category},
                    {"exit_code", code}};
  std::cerr << report.dump(2) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return dispatch(argc, argv);
  } catch (const Json::exception& e) {
    print_error("config", e.what(), kExitConfigError);
    return kExitConfigError;
  } catch (const std::invalid_argument& e) {
    print_error("config", e.what(), kExitConfigError);
    return kExitConfigError;
  } catch (const std::logic_error& e) {
    print_error("internal", e.what(), kExitInternalError);
    return kExitInternalError;
  } catch (const std::runtime_error& e) {
    print_error("config", e.what(), kExitConfigError);
    return kExitConfigError;
  } catch (const std::exception& e) {
    print_error("internal", e.what(), kExitInternalError);
    return kExitInternalError;
  }
}
