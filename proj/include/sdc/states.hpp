#pragma once

#include <vector>

#include <json.hpp>

#include "sdc/linalg.hpp"
#include "sdc/random.hpp"

namespace sdc {

using Partition = std::vector<Index>;

// Unit vector on a tensor product of subsystems. The constructor accepts
// amplitudes whose norm is within kNormalizationTol of 1 and rescales them to
// unit norm.
class PureState {
 public:
  PureState(ComplexVector amplitudes, Partition partition);

  const ComplexVector& amplitudes() const { return amplitudes_; }
  const Partition& partition() const { return partition_; }
  Index dim() const { return amplitudes_.size(); }
  bool is_bipartite() const { return partition_.size() == 2; }

  DensityMatrix density() const { return DensityMatrix::from_pure(amplitudes_); }

 private:
  ComplexVector amplitudes_;
  Partition partition_;
};

// Rectangular matrix X with |psi> = (X (x) I)|Phi_d>; rows index Alice's output
// space, columns the d-dimensional reference (B) space. ||X||_F^2 = d_in.
class EncodingMatrix {
 public:
  explicit EncodingMatrix(ComplexMatrix entries);

  Index d_out() const { return entries_.rows(); }
  Index d_in() const { return entries_.cols(); }
  const ComplexMatrix& entries() const { return entries_; }

 private:
  ComplexMatrix entries_;
};

// (1/sqrt d) sum_i |i>|i>, partition (d, d).
PureState max_entangled(Index d);

// |0...0> on the given partition.
PureState zero_state(const Partition& partition);

PureState tensor(const PureState& a, const PureState& b);

// x_ij = sqrt(d) * psi_ij for psi on (d_out, d).
EncodingMatrix encoding_matrix(const PureState& psi);

// (X (x) I)|Phi_d>, partition (x.d_out(), d).
PureState state_from_encoding(const EncodingMatrix& x, Index d);

// rho_B = (1/d) X^T X^*, evaluated from the encoding matrix.
DensityMatrix reduced_b(const PureState& psi);

// d * ||rho_B||_inf - 1, clamped at 0.
double flatness_epsilon(const PureState& psi);

// Globally Haar-random unit vector.
PureState random_state(const Partition& partition, RandomStream& rng);

// Tensor product of independent Haar-random vectors, one per factor.
PureState random_product_state(const Partition& partition, RandomStream& rng);

// {"partition": [...], "amplitudes": [[re, im], ...]}
nlohmann::json to_json(const PureState& psi);
PureState pure_state_from_json(const nlohmann::json& j);

}  // namespace sdc
