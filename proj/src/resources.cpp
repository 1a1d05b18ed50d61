#include "sdc/resources.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "sdc/concentration.hpp"

namespace sdc {

namespace {

void check_hypothesis(long long l, double eps) {
  if (l < 1) throw std::invalid_argument("resource profile: l must be >= 1");
  if (!(eps > 0.0 && eps <= 1.0))
    throw std::invalid_argument("resource profile: epsilon must lie in (0, 1]");
  // 2^l >= 10/eps, compared in log space so large l does not overflow.
  if (static_cast<double>(l) < std::log2(10.0 / eps))
    throw std::invalid_argument("resource profile: requires 2^l >= 10 / epsilon");
}

}  // namespace

ResourceProfile pure_preparation_profile(long long l, double eps) {
  check_hypothesis(l, eps);
  const double lf = static_cast<double>(l);
  const double log_l = std::log2(lf);
  const double log_inv_eps = std::log2(1.0 / eps);

  ResourceProfile p;
  p.l = l;
  p.epsilon = eps;
  p.qubits = lf + log_l + 2.0 * log_inv_eps + 7.0;
  p.ebits = lf;
  p.shared_random_bits = lf + log_l + 3.0 * log_inv_eps + 7.0;
  p.rate = 2.0 * lf / p.qubits;
  // d = 2^l: log2 d_A = log2(112 ln 2) + 2 log(1/eps) + l + log l.
  p.lemma_qubits = std::log2(112.0 * std::numbers::ln2) + 2.0 * log_inv_eps + lf + log_l + 1.0;
  p.lemma_shared_random_bits =
      std::log2(120.0 * std::numbers::ln2) + 3.0 * log_inv_eps + lf + log_l;
  return p;
}

ResourceProfile entangled_sharing_profile(long long l, double eps) {
  ResourceProfile p = pure_preparation_profile(l, eps);
  const double lf = static_cast<double>(l);
  p.shared_random_bits = 3.0 * lf + 2.0 * std::log2(lf) + 5.0 * std::log2(1.0 / eps) + 13.0;
  p.lemma_shared_random_bits = lemma2_n_value_log2(lf, eps).log2_n;
  return p;
}

double optimality_window(long long l, double eps) {
  return 3.0 * (std::log2(static_cast<double>(l)) + std::log2(1.0 / eps) + 8.0);
}

bool holevo_optimality_check(const ResourceProfile& profile) {
  if (profile.l < 1 || !(profile.epsilon > 0.0 && profile.epsilon <= 1.0)) return false;
  const double lf = static_cast<double>(profile.l);
  const double window = optimality_window(profile.l, profile.epsilon);
  const bool communication = profile.qubits >= lf && profile.qubits - lf <= window;
  const bool entanglement = std::abs(profile.ebits - lf) <= window;
  return communication && entanglement;
}

nlohmann::json to_json(const ResourceProfile& p) {
  return {{"l", p.l},
          {"epsilon", p.epsilon},
          {"qubits", p.qubits},
          {"ebits", p.ebits},
          {"shared_random_bits", p.shared_random_bits},
          {"rate", p.rate},
          {"lemma_qubits", p.lemma_qubits},
          {"lemma_shared_random_bits", p.lemma_shared_random_bits}};
}

}  // namespace sdc
