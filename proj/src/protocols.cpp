#include "sdc/protocols.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace sdc {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

double log2_dim(Index d) { return std::log2(static_cast<double>(d)); }

// View a tripartite (a1, a2, b) state as bipartite (a1 * a2, b).
PureState alice_bob_view(const ComplexVector& amps, Index a1, Index a2, Index b) {
  return PureState(amps, {a1 * a2, b});
}

void check_ensemble_for_preparation(const PureState& target, const IsometryEnsemble& ensemble) {
  require(ensemble.in_dim() == target.dim(),
          "randomized preparation: ensemble input dimension " +
              std::to_string(ensemble.in_dim()) + " does not match target dimension " +
              std::to_string(target.dim()));
}

void check_ensemble_for_sharing(const PureState& target, const IsometryEnsemble& ensemble) {
  require(target.partition().size() == 3,
          "entangled sharing: target partition must be (d_A1, d_A2, d_B)");
  const Index a1 = target.partition()[0];
  const Index a2 = target.partition()[1];
  const Index b = target.partition()[2];
  require(ensemble.in_dim() == a2 * b,
          "entangled sharing: ensemble input dimension must equal d_A2 * d_B of the target");
  require(a1 <= ensemble.out_dim(),
          "entangled sharing: d_A1 must not exceed the ensemble output dimension");
}

}  // namespace

double KrausPair::completeness_error() const {
  const ComplexMatrix sum = e0.adjoint() * e0 + e1.adjoint() * e1;
  return max_abs_diff(sum, ComplexMatrix::Identity(sum.rows(), sum.cols()));
}

KrausPair build_kraus(const ComplexMatrix& x) {
  require(x.size() > 0, "build_kraus: empty matrix");
  const double norm = operator_norm(x);
  require(norm > 0.0, "build_kraus: encoding matrix is zero");
  KrausPair k;
  k.e0 = x / norm;
  const ComplexMatrix gram = k.e0.adjoint() * k.e0;
  ComplexMatrix rest = ComplexMatrix::Identity(gram.rows(), gram.cols()) - gram;
  rest = (0.5 * (rest + rest.adjoint())).eval();
  k.e1 = psd_sqrt(rest);
  return k;
}

KrausPair build_kraus(const EncodingMatrix& x) { return build_kraus(x.entries()); }

double success_probability(const PureState& psi) {
  const DensityMatrix rho = reduced_b(psi);
  return 1.0 / (static_cast<double>(rho.dim()) * rho.eigenvalues().maxCoeff());
}

IsometryEnsemble::IsometryEnsemble(std::vector<ComplexMatrix> members, Index in_dim,
                                   OutPartition out)
    : members_(std::move(members)), in_dim_(in_dim), out_(out) {
  require(!members_.empty(), "IsometryEnsemble: ensemble must be nonempty");
  require(in_dim_ >= 1 && out_.d_a >= 1 && out_.d_b >= 1,
          "IsometryEnsemble: dimensions must be >= 1");
  require(out_dim() >= in_dim_, "IsometryEnsemble: output dimension smaller than input");
  for (const auto& v : members_) {
    require(v.rows() == out_dim() && v.cols() == in_dim_,
            "IsometryEnsemble: member has the wrong shape");
    require(max_abs_diff(v.adjoint() * v, ComplexMatrix::Identity(in_dim_, in_dim_)) <=
                kStructuralTol,
            "IsometryEnsemble: member is not an isometry");
  }
}

IsometryEnsemble IsometryEnsemble::identity(Index in_dim, OutPartition out) {
  require(out.d_a * out.d_b == in_dim,
          "IsometryEnsemble::identity: output partition must match the input dimension");
  return IsometryEnsemble({ComplexMatrix::Identity(in_dim, in_dim)}, in_dim, out);
}

IsometryEnsemble sample_ensemble(std::size_t n, Index in_dim, OutPartition out,
                                 const RandomStream& rng) {
  require(n >= 1, "sample_ensemble: ensemble size must be >= 1");
  require(in_dim >= 1 && out.d_a >= 1 && out.d_b >= 1,
          "sample_ensemble: dimensions must be >= 1");
  require(out.d_a * out.d_b >= in_dim,
          "sample_ensemble: d_A * d_B must be at least the input dimension");
  std::vector<ComplexMatrix> members;
  members.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    RandomStream member_rng = rng.substream(k);
    members.push_back(haar_isometry(in_dim, out.d_a * out.d_b, member_rng));
  }
  return IsometryEnsemble(std::move(members), in_dim, out);
}

ExactPreparation::ExactPreparation(const PureState& target)
    : target_(target),
      d_(target.is_bipartite() ? target.partition()[1] : 0),
      kraus_(build_kraus(encoding_matrix(target))),
      p_success_(sdc::success_probability(target)) {}

ProtocolOutcome ExactPreparation::run(RandomStream& rng) const {
  const ComplexVector phi = max_entangled(d_).amplitudes();
  const ComplexVector branch0 = apply_left(kraus_.e0, phi, d_);
  const ComplexVector branch1 = apply_left(kraus_.e1, phi, d_);
  const double n0 = branch0.squaredNorm();
  const double n1 = branch1.squaredNorm();
  const double p0 = n0 / (n0 + n1);

  ProtocolOutcome out;
  out.outcome_zero_probability = p0;
  out.resources.qubits_sent = log2_dim(target_.partition()[0]) + 1.0;
  out.resources.ebits_consumed = log2_dim(d_);

  if (rng.uniform() < p0) {
    out.succeeded = true;
    out.measurement_outcome = 0;
    PureState received(branch0 / std::sqrt(n0), target_.partition());
    out.fidelity_to_target = fidelity(received.amplitudes(), target_.amplitudes());
    out.final_state = std::move(received);
  } else {
    out.measurement_outcome = 1;
    out.final_state = PureState(branch1 / std::sqrt(n1), {d_, d_});
  }
  return out;
}

ProtocolOutcome run_exact_preparation(const PureState& target, RandomStream& rng) {
  require(target.is_bipartite(), "run_exact_preparation: target must be bipartite (d_out, d)");
  return ExactPreparation(target).run(rng);
}

double randomized_success_probability(const PureState& target, const IsometryEnsemble& ensemble,
                                      std::size_t k) {
  check_ensemble_for_preparation(target, ensemble);
  const auto& out = ensemble.out_partition();
  return success_probability(
      PureState(ensemble.member(k) * target.amplitudes(), {out.d_a, out.d_b}));
}

ProtocolOutcome run_randomized_preparation_with(const PureState& target,
                                                const IsometryEnsemble& ensemble, std::size_t k,
                                                RandomStream& private_rng) {
  check_ensemble_for_preparation(target, ensemble);
  require(k < ensemble.size(), "randomized preparation: ensemble index out of range");
  const ComplexMatrix& u = ensemble.member(k);
  const auto& part = ensemble.out_partition();

  const PureState randomized(u * target.amplitudes(), {part.d_a, part.d_b});
  ProtocolOutcome out = ExactPreparation(randomized).run(private_rng);
  out.chosen_k = k;
  out.resources.shared_random_bits = std::log2(static_cast<double>(ensemble.size()));
  if (out.succeeded) {
    PureState recovered(u.adjoint() * out.final_state->amplitudes(), target.partition());
    out.fidelity_to_target = fidelity(recovered.amplitudes(), target.amplitudes());
    out.final_state = std::move(recovered);
  }
  return out;
}

ProtocolOutcome run_randomized_preparation(const PureState& target,
                                           const IsometryEnsemble& ensemble,
                                           RandomStream& shared_rng, RandomStream& private_rng) {
  const std::size_t k = shared_rng.uniform_index(ensemble.size());
  return run_randomized_preparation_with(target, ensemble, k, private_rng);
}

double sharing_success_probability(const PureState& target, const IsometryEnsemble& ensemble,
                                   std::size_t k) {
  check_ensemble_for_sharing(target, ensemble);
  const Index a1 = target.partition()[0];
  const auto& part = ensemble.out_partition();
  return success_probability(alice_bob_view(
      apply_right(ensemble.member(k), target.amplitudes(), a1), a1, part.d_a, part.d_b));
}

ProtocolOutcome run_entangled_sharing_with(const PureState& target,
                                           const IsometryEnsemble& ensemble, std::size_t k,
                                           RandomStream& private_rng) {
  check_ensemble_for_sharing(target, ensemble);
  require(k < ensemble.size(), "entangled sharing: ensemble index out of range");
  const Index a1 = target.partition()[0];
  const ComplexMatrix& u = ensemble.member(k);
  const auto& part = ensemble.out_partition();

  // I_A1 (x) U_k; X then acts on A1 A2 jointly.
  const PureState randomized = alice_bob_view(apply_right(u, target.amplitudes(), a1), a1,
                                              part.d_a, part.d_b);
  ProtocolOutcome out = ExactPreparation(randomized).run(private_rng);
  out.chosen_k = k;
  // Only A2 is transmitted; A1 stays with Alice.
  out.resources.qubits_sent = log2_dim(part.d_a) + 1.0;
  out.resources.shared_random_bits = std::log2(static_cast<double>(ensemble.size()));
  if (out.succeeded) {
    PureState recovered(apply_right(u.adjoint(), out.final_state->amplitudes(), a1),
                        target.partition());
    out.fidelity_to_target = fidelity(recovered.amplitudes(), target.amplitudes());
    out.final_state = std::move(recovered);
  }
  return out;
}

ProtocolOutcome run_entangled_sharing(const PureState& target, const IsometryEnsemble& ensemble,
                                      RandomStream& shared_rng, RandomStream& private_rng) {
  const std::size_t k = shared_rng.uniform_index(ensemble.size());
  return run_entangled_sharing_with(target, ensemble, k, private_rng);
}

double SuccessEstimate::standard_error(double p) const {
  return trials == 0 ? 0.0 : std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
}

SuccessEstimate monte_carlo(std::size_t trials, const RandomStream& base,
                            const std::function<ProtocolOutcome(RandomStream&)>& trial) {
  SuccessEstimate est;
  est.trials = trials;
  for (std::size_t t = 0; t < trials; ++t) {
    RandomStream rng = base.substream(t);
    const ProtocolOutcome o = trial(rng);
    if (o.succeeded) {
      ++est.successes;
      est.min_fidelity = std::min(est.min_fidelity, o.fidelity_to_target.value_or(0.0));
    }
  }
  est.frequency = trials == 0 ? 0.0
                              : static_cast<double>(est.successes) / static_cast<double>(trials);
  return est;
}

nlohmann::json to_json(const ResourceTally& r) {
  return {{"qubits_sent", r.qubits_sent},
          {"ebits_consumed", r.ebits_consumed},
          {"shared_random_bits", r.shared_random_bits}};
}

nlohmann::json to_json(const ProtocolOutcome& o) {
  nlohmann::json j;
  j["succeeded"] = o.succeeded;
  j["chosen_k"] = o.chosen_k ? nlohmann::json(*o.chosen_k) : nlohmann::json(nullptr);
  j["measurement_outcome"] = o.measurement_outcome;
  j["final_state"] = o.final_state ? to_json(*o.final_state) : nlohmann::json(nullptr);
  j["fidelity_to_target"] =
      o.fidelity_to_target ? nlohmann::json(*o.fidelity_to_target) : nlohmann::json(nullptr);
  j["outcome_zero_probability"] = o.outcome_zero_probability;
  j["resources"] = to_json(o.resources);
  return j;
}

}  // namespace sdc
