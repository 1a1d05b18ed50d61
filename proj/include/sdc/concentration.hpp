#pragma once

// Concentration bounds for Haar-randomized states and the Monte Carlo
// experiments that probe them. All logarithms are base 2 unless a name says
// otherwise; every bound that can overflow a double has a log2 twin.

#include <cstddef>
#include <vector>

#include <json.hpp>

#include "sdc/linalg.hpp"
#include "sdc/protocols.hpp"
#include "sdc/random.hpp"
#include "sdc/states.hpp"

namespace sdc {

// Dimensions are real so the closed-form sizes (which are not integers) can be
// plugged in directly. Experiments additionally require integral values.
struct BoundParams {
  double d_a = 1.0;
  double d_b = 1.0;
  double epsilon = 0.5;

  // epsilon in (0, 1], d_a >= 0, d_b >= 1.
  void validate() const;
  friend bool operator==(const BoundParams&, const BoundParams&) = default;
};

// (10 d_B / eps)^(2 d_B) * exp(-d_A eps^2 / (14 ln 2)). May exceed 1 (vacuous)
// or overflow to +inf; use log2_mu_bound for large parameters.
double mu_bound(const BoundParams& p);
double log2_mu_bound(const BoundParams& p);

// exp(-d_A eps^2 / (14 ln 2)): single-state tail bound.
double gaussian_tail_bound(const BoundParams& p);
double log2_gaussian_tail_bound(const BoundParams& p);

// Binary relative entropy D(eps || mu) in bits; 0 < eps, mu < 1.
double divergence(double eps, double mu);

// -1 - eps log2(mu), the lower bound on divergence(eps, mu).
double divergence_lower_bound(double eps, double mu);

// Size bound (5/delta)^(2 dim) for a delta-net of pure states in C^dim.
double net_size_bound(Index dim, double delta);
double log2_net_size_bound(Index dim, double delta);

// |Tr((eta - eta~) O)| and ||eta - eta~||_1 for pure states eta, eta~ and an
// effect 0 <= O <= I. The first never exceeds half the second.
struct Fact1Sample {
  double overlap_difference = 0.0;
  double trace_distance = 0.0;
};
Fact1Sample fact1_sample(const ComplexVector& eta, const ComplexVector& eta_tilde,
                         const ComplexMatrix& effect);

struct ThresholdResult {
  bool feasible = false;  // false when the denominator is <= 0
  double value = 0.0;     // required ensemble size (strict lower bound)
  double log2_value = 0.0;
};

// n > 2 d_A d_B log(10 d_B/eps) / (eps^3 d_A/(14 ln 2) - 2 eps d_B log(10 d_B/eps) - 1)
ThresholdResult lemma1_n_threshold(const BoundParams& p);

// Closed-form dimensions and ensemble size for preparing d^2-dimensional states.
struct Lemma1Sizes {
  double d = 0.0;
  double epsilon = 0.0;
  bool hypothesis_holds = false;  // d >= 10 / eps
  double d_a = 0.0;               // (112 ln 2 / eps^2) d log d
  double n_simplified = 0.0;      // (120 ln 2 / eps^3) d log d
  double log2_n_simplified = 0.0;
  ThresholdResult threshold;      // lemma1_n_threshold at (d_a, d, eps)
};
Lemma1Sizes lemma1_sizes(double d, double eps);

struct Lemma2Size {
  double n = 0.0;               // (13440 (ln 2)^2 / eps^5) d^3 (log d)^2
  double log2_n = 0.0;
  double rounded_log2_n = 0.0;  // 3l + 2 log l + 5 log(1/eps) + 13, l = log d
};
// Requires d >= 10 / eps.
Lemma2Size lemma2_n_value(double d, double eps);
// Same, parameterized by log2 d so that d = 2^l never has to be formed.
Lemma2Size lemma2_n_value_log2(double log2_d, double eps);

// Which threshold defines "flat": (1 + eps)/d or the tighter (1 + 3 eps / 4)/d
// used when bounding the tail.
enum class FlatThreshold { full_epsilon, three_quarter_epsilon };

double flat_threshold(double d_b, double eps, FlatThreshold rule);

struct ConcentrationReport {
  BoundParams params;
  double empirical_tail = 0.0;
  double half_width = 0.0;  // 3 binomial standard errors
  double analytic_bound = 0.0;
  bool vacuous = false;     // analytic_bound >= 1
  std::size_t trials = 0;
  std::vector<double> per_state_flat_fraction;

  friend bool operator==(const ConcentrationReport&, const ConcentrationReport&) = default;
};

// Monte Carlo estimate of Pr_U(||Tr_A U psi U^dag||_inf >= threshold) over Haar
// isometries U : C^{dim psi} -> C^{d_A} (x) C^{d_B}, paired with mu_bound.
// Trial t uses rng.substream(t). The default threshold is (1 + 3 eps/4)/d_B.
ConcentrationReport flatness_tail_experiment(const BoundParams& p, const PureState& psi,
                                             std::size_t trials, const RandomStream& rng,
                                             FlatThreshold rule = FlatThreshold::three_quarter_epsilon);

// One report per d_A value; point i draws from rng.substream(i).
std::vector<ConcentrationReport> flatness_tail_sweep(double d_b, double eps,
                                                     const std::vector<Index>& d_a_values,
                                                     const PureState& psi, std::size_t trials,
                                                     const RandomStream& rng);

// ||Tr_A U_k psi U_k^dag||_inf for each member.
std::vector<double> randomized_marginal_norms(const IsometryEnsemble& ensemble,
                                              const PureState& psi);

// X_k = 1 iff member k leaves the state non-flat.
std::vector<int> flatness_indicators(const IsometryEnsemble& ensemble, const PureState& psi,
                                     double eps, FlatThreshold rule = FlatThreshold::full_epsilon);

// Fraction of members k for which U_k psi is eps-flat.
double ensemble_flat_fraction(const IsometryEnsemble& ensemble, const PureState& psi, double eps,
                              FlatThreshold rule = FlatThreshold::full_epsilon);

struct Lemma2Report {
  double flat_fraction = 0.0;
  std::vector<double> true_norms;       // ||Tr_{A1 A2} (I (x) U_k) psi (I (x) U_k)^dag||_inf
  std::vector<double> surrogate_norms;  // max_j ||Tr_{A2} U_k eta_j U_k^dag||_inf
  double max_violation = 0.0;           // max_k (true - surrogate); <= 0 up to rounding
};

// psi on (d_A1, d_A2, d_B); the ensemble acts on the A2 B factor. eta_j range
// over the eigenvectors of Tr_{A1} psi with nonzero eigenvalue.
Lemma2Report lemma2_flat_fraction(const IsometryEnsemble& ensemble, const PureState& psi,
                                  double eps,
                                  FlatThreshold rule = FlatThreshold::full_epsilon);

nlohmann::json to_json(const BoundParams& p);
nlohmann::json to_json(const ConcentrationReport& r);
ConcentrationReport concentration_report_from_json(const nlohmann::json& j);

}  // namespace sdc
