#pragma once

#include <json.hpp>

namespace sdc {

// Resource counts for communicating a 2l-qubit state. qubits, ebits and
// shared_random_bits are the closed-form approximations (with their "+7" /
// "+13" rounding constants); the lemma_* fields are the same counts evaluated
// from the exact ensemble dimensions and sizes.
struct ResourceProfile {
  long long l = 0;
  double epsilon = 0.0;
  double qubits = 0.0;
  double ebits = 0.0;
  double shared_random_bits = 0.0;
  double rate = 0.0;  // 2l / qubits: remote qubits per qubit sent
  double lemma_qubits = 0.0;               // log2 d_A + 1
  double lemma_shared_random_bits = 0.0;   // log2 n
};

// Requires l >= 1, eps in (0, 1], 2^l >= 10/eps.
ResourceProfile pure_preparation_profile(long long l, double eps);
ResourceProfile entangled_sharing_profile(long long l, double eps);

// Slack allowed above the communication and entanglement floors (both l):
// 3 * (log2 l + log2(1/eps) + 8).
double optimality_window(long long l, double eps);

// True iff l <= qubits <= l + window and |ebits - l| <= window.
bool holevo_optimality_check(const ResourceProfile& profile);

nlohmann::json to_json(const ResourceProfile& p);

}  // namespace sdc
