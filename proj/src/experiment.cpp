#include "sdc/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "sdc/concentration.hpp"
#include "sdc/protocols.hpp"
#include "sdc/report.hpp"
#include "sdc/resources.hpp"
#include "sdc/states.hpp"

namespace sdc {

namespace {

using nlohmann::json;

// Substreams of RandomStream(seed) by role.
constexpr std::uint64_t kFixtureStream = 0x5eed0001;
constexpr std::uint64_t kEnsembleStream = 0x5eed0002;
constexpr std::uint64_t kTrialStream = 0x5eed0003;

constexpr Index kMaxDim = 64;
// bounds only evaluates closed forms, so it accepts far larger d.
constexpr Index kMaxBoundsDim = Index{1} << 40;

struct Streams {
  RandomStream fixture;
  RandomStream ensemble;
  RandomStream trials;

  explicit Streams(std::uint64_t seed)
      : fixture(RandomStream(seed).substream(kFixtureStream)),
        ensemble(RandomStream(seed).substream(kEnsembleStream)),
        trials(RandomStream(seed).substream(kTrialStream)) {}
};

PureState load_state_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open state file '" + path + "'");
  try {
    return pure_state_from_json(json::parse(in));
  } catch (const std::exception& e) {
    throw InputError("state file '" + path + "': " + e.what());
  }
}

bool is_file_spec(const std::string& spec) { return spec.rfind("file:", 0) == 0; }

// Target on `partition` according to the state spec. For (d_A1, d_A2, d_B)
// partitions "mes" means |Phi_d>_{A1 B} (x) |0>_{A2}.
PureState resolve_state(const std::string& spec, const Partition& partition, RandomStream& rng) {
  if (is_file_spec(spec)) {
    PureState psi = load_state_file(spec.substr(5));
    if (psi.partition() != partition) {
      std::ostringstream msg;
      msg << "state file partition does not match the experiment (expected";
      for (Index d : partition) msg << " " << d;
      msg << ")";
      throw std::invalid_argument(msg.str());
    }
    return psi;
  }
  if (spec == "product") return zero_state(partition);
  if (spec == "haar") return random_state(partition, rng);
  if (spec == "mes") {
    if (partition.size() == 2) return max_entangled(partition[0]);
    const Index d = partition[0];
    const Index a2 = partition[1];
    ComplexVector v = ComplexVector::Zero(product(partition));
    for (Index i = 0; i < d; ++i) v(i * a2 * d + i) = 1.0 / std::sqrt(static_cast<double>(d));
    return PureState(std::move(v), partition);
  }
  throw ConfigError("state", "unknown state spec '" + spec + "'");
}

// Non-file specs get the canonical partition; file states keep their own
// bipartite partition.
PureState resolve_bipartite(const ExperimentConfig& c, RandomStream& rng) {
  if (is_file_spec(c.state)) {
    PureState psi = load_state_file(c.state.substr(5));
    if (!psi.is_bipartite())
      throw std::invalid_argument("state file must hold a bipartite state for this command");
    return psi;
  }
  return resolve_state(c.state, {c.d, c.d}, rng);
}

json estimate_json(const SuccessEstimate& est, double predicted) {
  const double se = est.standard_error(predicted);
  return {{"trials", est.trials},
          {"successes", est.successes},
          {"empirical_success", est.frequency},
          {"predicted_success", predicted},
          {"standard_error", se},
          {"within_3_sigma", std::abs(est.frequency - predicted) <= 3.0 * se + 1e-15},
          {"min_fidelity_on_success", est.min_fidelity}};
}

Report run_exact(const ExperimentConfig& c, Streams& s) {
  const PureState target = resolve_bipartite(c, s.fixture);
  const ExactPreparation prep(target);
  ResourceTally tally;
  const SuccessEstimate est = monte_carlo(c.trials, s.trials, [&](RandomStream& rng) {
    RandomStream priv = rng.substream(RandomStream::kPrivateStream);
    ProtocolOutcome o = prep.run(priv);
    tally = o.resources;
    return o;
  });
  json results = estimate_json(est, prep.success_probability());
  results["flatness_epsilon"] = flatness_epsilon(target);
  results["resources"] = to_json(tally);
  Report r;
  r.document["results"] = results;
  r.csv_header = {"trials", "successes", "empirical_success", "predicted_success",
                  "standard_error", "flatness_epsilon", "min_fidelity_on_success"};
  r.csv_rows = {results};
  return r;
}

Report run_randomized(const ExperimentConfig& c, Streams& s) {
  const PureState target = resolve_bipartite(c, s.fixture);
  const Index d = c.d;
  const Index d_a = c.d_a.front();
  if (d_a * d < target.dim())
    throw ConfigError("d_a", "d_a * d must be at least the target dimension");
  const IsometryEnsemble ensemble = sample_ensemble(c.ensemble_size, target.dim(), {d_a, d},
                                                    s.ensemble);
  double predicted = 0.0;
  for (std::size_t k = 0; k < ensemble.size(); ++k)
    predicted += randomized_success_probability(target, ensemble, k);
  predicted /= static_cast<double>(ensemble.size());

  ResourceTally tally;
  const SuccessEstimate est = monte_carlo(c.trials, s.trials, [&](RandomStream& rng) {
    RandomStream shared = rng.substream(RandomStream::kSharedStream);
    RandomStream priv = rng.substream(RandomStream::kPrivateStream);
    ProtocolOutcome o = run_randomized_preparation(target, ensemble, shared, priv);
    tally = o.resources;
    return o;
  });

  json results = estimate_json(est, predicted);
  const double unrandomized = success_probability(target);
  results["unrandomized_success"] = unrandomized;
  const double se0 = est.standard_error(unrandomized);
  results["sigma_above_unrandomized"] =
      se0 > 0.0 ? (est.frequency - unrandomized) / se0 : 0.0;
  results["resources"] = to_json(tally);
  Report r;
  r.document["results"] = results;
  r.csv_header = {"trials", "successes", "empirical_success", "predicted_success",
                  "unrandomized_success", "standard_error", "min_fidelity_on_success"};
  r.csv_rows = {results};
  return r;
}

Report run_share(const ExperimentConfig& c, Streams& s) {
  const Index d = c.d;
  const Index d_a = c.d_a.front();
  const Partition partition{d, d, d};
  const PureState target = resolve_state(c.state, partition, s.fixture);
  const IsometryEnsemble ensemble = sample_ensemble(c.ensemble_size, d * d, {d_a, d}, s.ensemble);
  if (d > d_a * d) throw ConfigError("d_a", "d_A1 must not exceed d_a * d");

  double predicted = 0.0;
  for (std::size_t k = 0; k < ensemble.size(); ++k)
    predicted += sharing_success_probability(target, ensemble, k);
  predicted /= static_cast<double>(ensemble.size());

  const Index keep_a1[] = {0};
  const DensityMatrix target_a1 = partial_trace_pure(target.amplitudes(), partition, keep_a1);
  double max_a1_distance = 0.0;
  ResourceTally tally;
  const SuccessEstimate est = monte_carlo(c.trials, s.trials, [&](RandomStream& rng) {
    RandomStream shared = rng.substream(RandomStream::kSharedStream);
    RandomStream priv = rng.substream(RandomStream::kPrivateStream);
    ProtocolOutcome o = run_entangled_sharing(target, ensemble, shared, priv);
    tally = o.resources;
    if (o.succeeded) {
      const DensityMatrix a1 =
          partial_trace_pure(o.final_state->amplitudes(), partition, keep_a1);
      max_a1_distance =
          std::max(max_a1_distance, 0.5 * trace_norm(a1.matrix() - target_a1.matrix()));
    }
    return o;
  });

  json results = estimate_json(est, predicted);
  results["unrandomized_success"] =
      success_probability(PureState(target.amplitudes(), {d * d, d}));
  results["max_a1_trace_distance"] = max_a1_distance;
  results["resources"] = to_json(tally);
  Report r;
  r.document["results"] = results;
  r.csv_header = {"trials", "successes", "empirical_success", "predicted_success",
                  "unrandomized_success", "min_fidelity_on_success", "max_a1_trace_distance"};
  r.csv_rows = {results};
  return r;
}

Report run_tail(const ExperimentConfig& c, Streams& s) {
  const PureState psi = resolve_bipartite(c, s.fixture);
  const auto reports = flatness_tail_sweep(static_cast<double>(c.d), c.epsilon, c.d_a, psi,
                                           c.trials, s.trials);
  Report r;
  json points = json::array();
  bool non_increasing = true;
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const auto& rep = reports[i];
    json p = to_json(rep);
    p["log2_analytic_bound"] = log2_mu_bound(rep.params);
    points.push_back(p);
    r.csv_rows.push_back({{"d_a", rep.params.d_a},
                          {"d_b", rep.params.d_b},
                          {"epsilon", rep.params.epsilon},
                          {"trials", rep.trials},
                          {"empirical_tail", rep.empirical_tail},
                          {"half_width", rep.half_width},
                          {"analytic_bound", rep.analytic_bound},
                          {"vacuous", rep.vacuous}});
    if (i > 0 && rep.empirical_tail > reports[i - 1].empirical_tail) non_increasing = false;
  }
  r.document["results"] = {{"points", points},
                           {"threshold", flat_threshold(static_cast<double>(c.d), c.epsilon,
                                                        FlatThreshold::three_quarter_epsilon)},
                           {"non_increasing_in_sweep_order", non_increasing}};
  r.csv_header = tail_csv_header();
  return r;
}

Report run_flat_fraction(const ExperimentConfig& c, Streams& s) {
  const PureState psi = resolve_bipartite(c, s.fixture);
  const Index d_a = c.d_a.front();
  if (d_a * c.d < psi.dim())
    throw ConfigError("d_a", "d_a * d must be at least the state dimension");
  const IsometryEnsemble ensemble = sample_ensemble(c.ensemble_size, psi.dim(), {d_a, c.d},
                                                    s.ensemble);
  json results = {
      {"ensemble_size", ensemble.size()},
      {"flat_fraction", ensemble_flat_fraction(ensemble, psi, c.epsilon)},
      {"flat_fraction_three_quarter_threshold",
       ensemble_flat_fraction(ensemble, psi, c.epsilon, FlatThreshold::three_quarter_epsilon)},
      {"threshold", flat_threshold(static_cast<double>(c.d), c.epsilon,
                                   FlatThreshold::full_epsilon)},
      {"target_fraction", 1.0 - c.epsilon}};
  Report r;
  r.document["results"] = results;
  r.csv_header = {"ensemble_size", "flat_fraction", "flat_fraction_three_quarter_threshold", "threshold",
                  "target_fraction"};
  r.csv_rows = {results};
  return r;
}

Report run_bounds(const ExperimentConfig& c) {
  const Lemma1Sizes s = lemma1_sizes(static_cast<double>(c.d), c.epsilon);
  const BoundParams at_lemma{s.d_a, s.d, s.epsilon};
  json lemma1 = {{"hypothesis_holds", s.hypothesis_holds},
                 {"d_a", s.d_a},
                 {"log2_d_a", std::log2(s.d_a)},
                 {"n_simplified", s.n_simplified},
                 {"log2_n_simplified", s.log2_n_simplified},
                 {"threshold_feasible", s.threshold.feasible},
                 {"log2_mu", log2_mu_bound(at_lemma)},
                 {"log2_gaussian_tail", log2_gaussian_tail_bound(at_lemma)}};
  if (s.threshold.feasible) {
    lemma1["n_threshold"] = s.threshold.value;
    lemma1["log2_n_threshold"] = s.threshold.log2_value;
    lemma1["simplified_is_upper_bound"] = s.n_simplified >= s.threshold.value;
  }
  json results = {{"lemma1", lemma1}};
  if (s.hypothesis_holds) {
    const Lemma2Size l2 = lemma2_n_value(s.d, s.epsilon);
    results["lemma2"] = {{"n", l2.n},
                         {"log2_n", l2.log2_n},
                         {"rounded_log2_n", l2.rounded_log2_n}};
  } else {
    results["lemma2"] = nullptr;
  }
  Report r;
  r.document["results"] = results;
  json row = lemma1;
  if (s.hypothesis_holds) row["lemma2_log2_n"] = results["lemma2"]["log2_n"];
  r.csv_header = {"hypothesis_holds", "d_a",          "n_simplified",    "log2_n_simplified",
                  "n_threshold",      "log2_n_threshold", "lemma2_log2_n"};
  r.csv_rows = {row};
  return r;
}

Report run_resources(const ExperimentConfig& c) {
  const ResourceProfile pure = pure_preparation_profile(c.l, c.epsilon);
  const ResourceProfile shared = entangled_sharing_profile(c.l, c.epsilon);
  json jp = to_json(pure);
  jp["near_optimal"] = holevo_optimality_check(pure);
  json js = to_json(shared);
  js["near_optimal"] = holevo_optimality_check(shared);
  Report r;
  r.document["results"] = {
      {"pure_preparation", jp},
      {"entangled_sharing", js},
      {"optimality_window", optimality_window(c.l, c.epsilon)},
      {"note", "qubits and shared_random_bits use the rounded +7/+13 approximations; "
               "lemma_* fields are the exact-size counterparts"}};
  jp["profile"] = "pure_preparation";
  js["profile"] = "entangled_sharing";
  r.csv_header = {"profile", "l", "epsilon", "qubits", "ebits", "shared_random_bits", "rate",
                  "lemma_qubits", "lemma_shared_random_bits", "near_optimal"};
  r.csv_rows = {jp, js};
  return r;
}

void pretty_print(std::ostringstream& out, const json& v, const std::string& prefix) {
  if (v.is_object()) {
    for (auto it = v.begin(); it != v.end(); ++it)
      pretty_print(out, it.value(), prefix.empty() ? it.key() : prefix + "." + it.key());
    return;
  }
  if (v.is_array() && !v.empty() && v[0].is_object()) {
    for (std::size_t i = 0; i < v.size(); ++i)
      pretty_print(out, v[i], prefix + "[" + std::to_string(i) + "]");
    return;
  }
  out << prefix << ": " << (v.is_number() ? format_number(v) : v.dump()) << "\n";
}

}  // namespace

std::string to_string(Command c) {
  switch (c) {
    case Command::exact: return "exact";
    case Command::randomized: return "randomized";
    case Command::share: return "share";
    case Command::tail: return "tail";
    case Command::flat_fraction: return "flat-fraction";
    case Command::bounds: return "bounds";
    case Command::resources: return "resources";
  }
  return "?";
}

Command command_from_string(const std::string& s) {
  for (Command c : {Command::exact, Command::randomized, Command::share, Command::tail,
                    Command::flat_fraction, Command::bounds, Command::resources})
    if (to_string(c) == s) return c;
  throw ConfigError("command", "unknown command '" + s + "'");
}

std::string to_string(OutputFormat f) {
  switch (f) {
    case OutputFormat::json: return "json";
    case OutputFormat::csv: return "csv";
    case OutputFormat::pretty: return "pretty";
  }
  return "?";
}

OutputFormat output_format_from_string(const std::string& s) {
  if (s == "json") return OutputFormat::json;
  if (s == "csv") return OutputFormat::csv;
  if (s == "pretty") return OutputFormat::pretty;
  throw ConfigError("output", "unknown output format '" + s + "'");
}

void validate(const ExperimentConfig& c) {
  if (c.command == Command::bounds) {
    if (c.d < 2 || c.d > kMaxBoundsDim) throw ConfigError("d", "bounds need d in [2, 2^40]");
  } else if (c.d < 1 || c.d > kMaxDim) {
    throw ConfigError("d", "must lie in [1, 64]");
  }
  if (c.d_a.empty()) throw ConfigError("d_a", "at least one value is required");
  for (Index a : c.d_a)
    if (a < 1 || a > 4096) throw ConfigError("d_a", "must lie in [1, 4096]");
  if (!(c.epsilon > 0.0 && c.epsilon <= 1.0)) throw ConfigError("epsilon", "must lie in (0, 1]");
  if (c.trials < 1 || c.trials > 10'000'000) throw ConfigError("trials", "must lie in [1, 1e7]");
  if (c.ensemble_size < 1 || c.ensemble_size > 100'000)
    throw ConfigError("ensemble_size", "must lie in [1, 100000]");
  if (c.l < 1) throw ConfigError("l", "must be >= 1");
  const bool known_state = c.state == "mes" || c.state == "product" || c.state == "haar" ||
                           (is_file_spec(c.state) && c.state.size() > 5);
  if (!known_state) throw ConfigError("state", "expected mes, product, haar or file:<path>");

  switch (c.command) {
    case Command::randomized:
    case Command::share:
    case Command::flat_fraction:
      if (c.d_a.front() < c.d) throw ConfigError("d_a", "must be >= d");
      break;
    case Command::tail:
      if (c.trials < 100) throw ConfigError("trials", "tail experiments need at least 100");
      if (c.d == 1) throw ConfigError("d", "tail experiments need d >= 2");
      break;
    default:
      break;
  }
}

nlohmann::json to_json(const ExperimentConfig& c) {
  json j = {{"command", to_string(c.command)},
            {"seed", c.seed},
            {"output", to_string(c.output)}};
  switch (c.command) {
    case Command::resources:
      j["l"] = c.l;
      j["epsilon"] = c.epsilon;
      break;
    case Command::bounds:
      j["d"] = c.d;
      j["epsilon"] = c.epsilon;
      break;
    default:
      j["d"] = c.d;
      j["d_a"] = c.d_a;
      j["epsilon"] = c.epsilon;
      j["trials"] = c.trials;
      j["ensemble_size"] = c.ensemble_size;
      j["state"] = c.state;
  }
  return j;
}

Report run(const ExperimentConfig& config) {
  validate(config);
  Streams streams(config.seed);
  Report r;
  switch (config.command) {
    case Command::exact: r = run_exact(config, streams); break;
    case Command::randomized: r = run_randomized(config, streams); break;
    case Command::share: r = run_share(config, streams); break;
    case Command::tail: r = run_tail(config, streams); break;
    case Command::flat_fraction: r = run_flat_fraction(config, streams); break;
    case Command::bounds: r = run_bounds(config); break;
    case Command::resources: r = run_resources(config); break;
  }
  r.document["config"] = to_json(config);
  return r;
}

std::string write_report(const Report& report, OutputFormat format) {
  switch (format) {
    case OutputFormat::json:
      return canonical_json(report.document);
    case OutputFormat::csv:
      return to_csv(report.csv_header, report.csv_rows);
    case OutputFormat::pretty: {
      std::ostringstream out;
      out << "seed: " << report.document.at("config").at("seed").get<std::uint64_t>() << "\n";
      pretty_print(out, report.document.at("config"), "config");
      pretty_print(out, report.document.at("results"), "results");
      return out.str();
    }
  }
  return {};
}

}  // namespace sdc
