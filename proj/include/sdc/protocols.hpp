#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include <json.hpp>

#include "sdc/linalg.hpp"
#include "sdc/random.hpp"
#include "sdc/states.hpp"

namespace sdc {

// Two-outcome generalized measurement. Outcome 0 applies e0 = X/||X||_inf
// (d_out x d_in); outcome 1 applies e1 = sqrt(I - e0^dag e0) (d_in x d_in).
struct KrausPair {
  ComplexMatrix e0;
  ComplexMatrix e1;

  // max |e0^dag e0 + e1^dag e1 - I|
  double completeness_error() const;
};

KrausPair build_kraus(const ComplexMatrix& x);
KrausPair build_kraus(const EncodingMatrix& x);

// 1 / (d ||rho_B||_inf), the probability that outcome 0 occurs when Alice
// measures her half of |Phi_d>.
double success_probability(const PureState& psi);

struct ResourceTally {
  double qubits_sent = 0.0;         // log2 of the transmitted dimension, +1 for the outcome flag
  double ebits_consumed = 0.0;
  double shared_random_bits = 0.0;
};

struct ProtocolOutcome {
  bool succeeded = false;
  std::optional<std::size_t> chosen_k;
  int measurement_outcome = 1;
  // On success the reconstructed target; on failure the post-measurement
  // state produced by e1.
  std::optional<PureState> final_state;
  std::optional<double> fidelity_to_target;
  // Exact probability of outcome 0 for this run's (possibly randomized) state.
  double outcome_zero_probability = 0.0;
  ResourceTally resources;
};

// Shared list of isometries from in_dim into C^{d_a} (x) C^{d_b}.
struct OutPartition {
  Index d_a = 1;
  Index d_b = 1;
  friend bool operator==(const OutPartition&, const OutPartition&) = default;
};

class IsometryEnsemble {
 public:
  IsometryEnsemble(std::vector<ComplexMatrix> members, Index in_dim, OutPartition out);

  // Single-member ensemble {I}; requires d_a * d_b == in_dim.
  static IsometryEnsemble identity(Index in_dim, OutPartition out);

  std::size_t size() const { return members_.size(); }
  const ComplexMatrix& member(std::size_t k) const { return members_.at(k); }
  const std::vector<ComplexMatrix>& members() const { return members_; }
  Index in_dim() const { return in_dim_; }
  const OutPartition& out_partition() const { return out_; }
  Index out_dim() const { return out_.d_a * out_.d_b; }

 private:
  std::vector<ComplexMatrix> members_;
  Index in_dim_;
  OutPartition out_;
};

// n i.i.d. Haar isometries. Member k is drawn from rng.substream(k), so two
// parties holding the same stream derive identical ensembles.
IsometryEnsemble sample_ensemble(std::size_t n, Index in_dim, OutPartition out,
                                 const RandomStream& rng);

// Exact probabilistic preparation of a bipartite target (d_out, d) from
// |Phi_d>. Holds the Kraus pair so repeated runs reuse it.
class ExactPreparation {
 public:
  explicit ExactPreparation(const PureState& target);

  double success_probability() const { return p_success_; }
  const KrausPair& kraus() const { return kraus_; }
  const PureState& target() const { return target_; }

  // One shot: samples the measurement outcome from `rng`.
  ProtocolOutcome run(RandomStream& rng) const;

 private:
  PureState target_;
  Index d_;
  KrausPair kraus_;
  double p_success_;
};

ProtocolOutcome run_exact_preparation(const PureState& target, RandomStream& rng);

// Draws k from shared_rng, prepares U_k|target> with the exact protocol and
// undoes U_k on Bob's side.
ProtocolOutcome run_randomized_preparation(const PureState& target,
                                           const IsometryEnsemble& ensemble,
                                           RandomStream& shared_rng, RandomStream& private_rng);

// Same protocol with the ensemble member fixed.
ProtocolOutcome run_randomized_preparation_with(const PureState& target,
                                                const IsometryEnsemble& ensemble, std::size_t k,
                                                RandomStream& private_rng);

// Target on (d_A1, d_A2, d_B); ensemble acts on the A2 B factor. Alice keeps
// A1, transmits A2, Bob undoes U_k on A2 B.
ProtocolOutcome run_entangled_sharing(const PureState& target, const IsometryEnsemble& ensemble,
                                      RandomStream& shared_rng, RandomStream& private_rng);

ProtocolOutcome run_entangled_sharing_with(const PureState& target,
                                           const IsometryEnsemble& ensemble, std::size_t k,
                                           RandomStream& private_rng);

// Outcome-0 probability of the sharing step for member k.
double sharing_success_probability(const PureState& target, const IsometryEnsemble& ensemble,
                                   std::size_t k);

// Outcome-0 probability of the randomized preparation for member k.
double randomized_success_probability(const PureState& target, const IsometryEnsemble& ensemble,
                                      std::size_t k);

struct SuccessEstimate {
  std::size_t trials = 0;
  std::size_t successes = 0;
  double frequency = 0.0;
  // Binomial standard error of `frequency` under the predicted probability.
  double standard_error(double p) const;
  // Smallest fidelity among successful runs (1 when there were none).
  double min_fidelity = 1.0;
};

// Runs `trial` for t = 0..trials-1 with base.substream(t) and aggregates.
SuccessEstimate monte_carlo(std::size_t trials, const RandomStream& base,
                            const std::function<ProtocolOutcome(RandomStream&)>& trial);

nlohmann::json to_json(const ResourceTally& r);
nlohmann::json to_json(const ProtocolOutcome& o);

}  // namespace sdc
