#include "sdc/concentration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace sdc {

namespace {

constexpr double kLn2 = std::numbers::ln2;

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

bool is_integral(double x) { return std::isfinite(x) && x == std::floor(x); }

// d_A eps^2 / (14 ln 2), the exponent of the single-state tail bound.
double tail_exponent(const BoundParams& p) { return p.d_a * p.epsilon * p.epsilon / (14.0 * kLn2); }

double marginal_norm(const ComplexVector& amps, Index d_a, Index d_b) {
  return max_eigenvalue(reduced_b(PureState(amps, {d_a, d_b})).matrix());
}

}  // namespace

void BoundParams::validate() const {
  require(std::isfinite(epsilon) && epsilon > 0.0 && epsilon <= 1.0,
          "BoundParams: epsilon must lie in (0, 1]");
  require(std::isfinite(d_a) && d_a >= 0.0, "BoundParams: d_A must be >= 0");
  require(std::isfinite(d_b) && d_b >= 1.0, "BoundParams: d_B must be >= 1");
}

double mu_bound(const BoundParams& p) {
  p.validate();
  return std::pow(10.0 * p.d_b / p.epsilon, 2.0 * p.d_b) * std::exp(-tail_exponent(p));
}

double log2_mu_bound(const BoundParams& p) {
  p.validate();
  return 2.0 * p.d_b * std::log2(10.0 * p.d_b / p.epsilon) - tail_exponent(p) / kLn2;
}

double gaussian_tail_bound(const BoundParams& p) {
  p.validate();
  return std::exp(-tail_exponent(p));
}

double log2_gaussian_tail_bound(const BoundParams& p) {
  p.validate();
  return -tail_exponent(p) / kLn2;
}

double divergence(double eps, double mu) {
  require(eps > 0.0 && eps < 1.0, "divergence: eps must lie strictly between 0 and 1");
  require(mu > 0.0 && mu < 1.0, "divergence: mu must lie strictly between 0 and 1");
  return eps * std::log2(eps / mu) + (1.0 - eps) * std::log2((1.0 - eps) / (1.0 - mu));
}

double divergence_lower_bound(double eps, double mu) {
  require(mu > 0.0, "divergence_lower_bound: mu must be positive");
  return -1.0 - eps * std::log2(mu);
}

double net_size_bound(Index dim, double delta) {
  return std::exp2(log2_net_size_bound(dim, delta));
}

double log2_net_size_bound(Index dim, double delta) {
  require(dim >= 1, "net_size_bound: dimension must be >= 1");
  require(delta > 0.0, "net_size_bound: delta must be positive");
  return 2.0 * static_cast<double>(dim) * std::log2(5.0 / delta);
}

Fact1Sample fact1_sample(const ComplexVector& eta, const ComplexVector& eta_tilde,
                         const ComplexMatrix& effect) {
  require(eta.size() == eta_tilde.size() && effect.rows() == eta.size() &&
              effect.cols() == eta.size(),
          "fact1_sample: dimension mismatch");
  const ComplexMatrix diff = eta * eta.adjoint() - eta_tilde * eta_tilde.adjoint();
  return {std::abs((diff * effect).trace()), trace_norm(diff)};
}

ThresholdResult lemma1_n_threshold(const BoundParams& p) {
  p.validate();
  const double log_term = std::log2(10.0 * p.d_b / p.epsilon);
  const double numerator = 2.0 * p.d_a * p.d_b * log_term;
  const double denominator = std::pow(p.epsilon, 3) * p.d_a / (14.0 * kLn2) -
                             2.0 * p.epsilon * p.d_b * log_term - 1.0;
  ThresholdResult r;
  r.feasible = denominator > 0.0;
  if (r.feasible) {
    r.value = numerator / denominator;
    r.log2_value = std::log2(r.value);
  }
  return r;
}

Lemma1Sizes lemma1_sizes(double d, double eps) {
  require(d >= 2.0, "lemma1_sizes: d must be >= 2");
  require(eps > 0.0 && eps <= 1.0, "lemma1_sizes: epsilon must lie in (0, 1]");
  Lemma1Sizes s;
  s.d = d;
  s.epsilon = eps;
  s.hypothesis_holds = d >= 10.0 / eps;
  const double d_log_d = d * std::log2(d);
  s.d_a = 112.0 * kLn2 / (eps * eps) * d_log_d;
  s.n_simplified = 120.0 * kLn2 / std::pow(eps, 3) * d_log_d;
  s.log2_n_simplified = std::log2(s.n_simplified);
  s.threshold = lemma1_n_threshold({s.d_a, d, eps});
  return s;
}

Lemma2Size lemma2_n_value(double d, double eps) {
  require(d > 0.0, "lemma2_n_value: d must be positive");
  return lemma2_n_value_log2(std::log2(d), eps);
}

Lemma2Size lemma2_n_value_log2(double l, double eps) {
  require(eps > 0.0 && eps <= 1.0, "lemma2_n_value: epsilon must lie in (0, 1]");
  require(l >= std::log2(10.0 / eps), "lemma2_n_value: requires d >= 10 / epsilon");
  Lemma2Size s;
  s.log2_n = std::log2(13440.0) + 2.0 * std::log2(kLn2) - 5.0 * std::log2(eps) + 3.0 * l +
             2.0 * std::log2(l);
  s.n = std::exp2(s.log2_n);
  s.rounded_log2_n = 3.0 * l + 2.0 * std::log2(l) + 5.0 * std::log2(1.0 / eps) + 13.0;
  return s;
}

double flat_threshold(double d_b, double eps, FlatThreshold rule) {
  const double slack = rule == FlatThreshold::full_epsilon ? eps : 0.75 * eps;
  return (1.0 + slack) / d_b;
}

ConcentrationReport flatness_tail_experiment(const BoundParams& p, const PureState& psi,
                                             std::size_t trials, const RandomStream& rng,
                                             FlatThreshold rule) {
  p.validate();
  require(is_integral(p.d_a) && p.d_a >= 1.0 && is_integral(p.d_b),
          "flatness_tail_experiment: dimensions must be positive integers");
  const auto d_a = static_cast<Index>(p.d_a);
  const auto d_b = static_cast<Index>(p.d_b);
  require(d_a * d_b >= psi.dim(),
          "flatness_tail_experiment: d_A * d_B must be at least the input dimension");
  require(trials >= 100, "flatness_tail_experiment: at least 100 trials are required");

  const double threshold = flat_threshold(p.d_b, p.epsilon, rule);
  std::size_t hits = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    RandomStream trial_rng = rng.substream(t);
    const ComplexMatrix u = haar_isometry(psi.dim(), d_a * d_b, trial_rng);
    if (marginal_norm(u * psi.amplitudes(), d_a, d_b) >= threshold) ++hits;
  }

  ConcentrationReport r;
  r.params = p;
  r.trials = trials;
  r.empirical_tail = static_cast<double>(hits) / static_cast<double>(trials);
  r.half_width =
      3.0 * std::sqrt(r.empirical_tail * (1.0 - r.empirical_tail) / static_cast<double>(trials));
  r.analytic_bound = mu_bound(p);
  r.vacuous = !(r.analytic_bound < 1.0);
  r.per_state_flat_fraction = {1.0 - r.empirical_tail};
  return r;
}

std::vector<ConcentrationReport> flatness_tail_sweep(double d_b, double eps,
                                                     const std::vector<Index>& d_a_values,
                                                     const PureState& psi, std::size_t trials,
                                                     const RandomStream& rng) {
  std::vector<ConcentrationReport> out;
  out.reserve(d_a_values.size());
  for (std::size_t i = 0; i < d_a_values.size(); ++i)
    out.push_back(flatness_tail_experiment({static_cast<double>(d_a_values[i]), d_b, eps}, psi,
                                           trials, rng.substream(i)));
  return out;
}

std::vector<double> randomized_marginal_norms(const IsometryEnsemble& ensemble,
                                              const PureState& psi) {
  require(ensemble.in_dim() == psi.dim(),
          "ensemble input dimension does not match the state dimension");
  const auto& part = ensemble.out_partition();
  std::vector<double> norms;
  norms.reserve(ensemble.size());
  for (const auto& u : ensemble.members())
    norms.push_back(marginal_norm(u * psi.amplitudes(), part.d_a, part.d_b));
  return norms;
}

std::vector<int> flatness_indicators(const IsometryEnsemble& ensemble, const PureState& psi,
                                     double eps, FlatThreshold rule) {
  const double threshold =
      flat_threshold(static_cast<double>(ensemble.out_partition().d_b), eps, rule);
  std::vector<int> x;
  for (double norm : randomized_marginal_norms(ensemble, psi)) x.push_back(norm >= threshold);
  return x;
}

double ensemble_flat_fraction(const IsometryEnsemble& ensemble, const PureState& psi, double eps,
                              FlatThreshold rule) {
  require(eps > 0.0, "ensemble_flat_fraction: epsilon must be positive");
  const double threshold =
      flat_threshold(static_cast<double>(ensemble.out_partition().d_b), eps, rule);
  const auto norms = randomized_marginal_norms(ensemble, psi);
  const auto flat = std::count_if(norms.begin(), norms.end(),
                                  [&](double n) { return n < threshold; });
  return static_cast<double>(flat) / static_cast<double>(norms.size());
}

Lemma2Report lemma2_flat_fraction(const IsometryEnsemble& ensemble, const PureState& psi,
                                  double eps, FlatThreshold rule) {
  require(eps > 0.0, "lemma2_flat_fraction: epsilon must be positive");
  require(psi.partition().size() == 3,
          "lemma2_flat_fraction: state partition must be (d_A1, d_A2, d_B)");
  const Index a1 = psi.partition()[0];
  const Index a2b = psi.partition()[1] * psi.partition()[2];
  require(ensemble.in_dim() == a2b,
          "lemma2_flat_fraction: ensemble must act on the A2 B factor of the state");
  const auto& part = ensemble.out_partition();
  const double threshold = flat_threshold(static_cast<double>(part.d_b), eps, rule);

  // Support eigenvectors of Tr_{A1} psi.
  const Index dims[] = {a1, a2b};
  const Index keep[] = {1};
  const DensityMatrix rho = partial_trace_pure(psi.amplitudes(), dims, keep);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(rho.matrix());
  std::vector<ComplexVector> etas;
  for (Index j = 0; j < es.eigenvalues().size(); ++j)
    if (es.eigenvalues()(j) > kStructuralTol) etas.emplace_back(es.eigenvectors().col(j));

  Lemma2Report r;
  r.max_violation = -std::numeric_limits<double>::infinity();
  std::size_t flat = 0;
  for (const auto& u : ensemble.members()) {
    const double truth =
        marginal_norm(apply_right(u, psi.amplitudes(), a1), a1 * part.d_a, part.d_b);
    double surrogate = 0.0;
    for (const auto& eta : etas)
      surrogate = std::max(surrogate, marginal_norm(u * eta, part.d_a, part.d_b));
    r.true_norms.push_back(truth);
    r.surrogate_norms.push_back(surrogate);
    r.max_violation = std::max(r.max_violation, truth - surrogate);
    if (truth < threshold) ++flat;
  }
  r.flat_fraction = static_cast<double>(flat) / static_cast<double>(ensemble.size());
  return r;
}

nlohmann::json to_json(const BoundParams& p) {
  return {{"d_a", p.d_a}, {"d_b", p.d_b}, {"epsilon", p.epsilon}};
}

nlohmann::json to_json(const ConcentrationReport& r) {
  return {{"params", to_json(r.params)},
          {"empirical_tail", r.empirical_tail},
          {"half_width", r.half_width},
          {"analytic_bound", r.analytic_bound},
          {"vacuous", r.vacuous},
          {"trials", r.trials},
          {"per_state_flat_fraction", r.per_state_flat_fraction}};
}

ConcentrationReport concentration_report_from_json(const nlohmann::json& j) {
  ConcentrationReport r;
  const auto& p = j.at("params");
  r.params = {p.at("d_a").get<double>(), p.at("d_b").get<double>(),
              p.at("epsilon").get<double>()};
  r.empirical_tail = j.at("empirical_tail").get<double>();
  r.half_width = j.at("half_width").get<double>();
  r.analytic_bound = j.at("analytic_bound").get<double>();
  r.vacuous = j.at("vacuous").get<bool>();
  r.trials = j.at("trials").get<std::size_t>();
  r.per_state_flat_fraction = j.at("per_state_flat_fraction").get<std::vector<double>>();
  return r;
}

}  // namespace sdc
