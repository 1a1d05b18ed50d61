#pragma once

// Dense complex linear algebra used by every other module.
//
// Tensor-product convention (global): subsystem 0 is the leftmost, most
// significant factor and flattening is row-major, so for a bipartite space
// C^dA (x) C^dB the basis vector |i>|j> has flat index i * dB + j.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "sdc/random.hpp"

namespace sdc {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

// Structural tolerance: unitarity, Hermiticity, trace, positivity.
inline constexpr double kStructuralTol = 1e-10;
// Accepted deviation of an input vector's norm from 1.
inline constexpr double kNormalizationTol = 1e-8;

bool all_finite(const ComplexMatrix& m);

// Largest |entry| of a - b.
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

// Unit-trace positive semidefinite Hermitian matrix. Invariants are checked on
// construction (Hermitian, trace 1, eigenvalues >= -kStructuralTol).
class DensityMatrix {
 public:
  explicit DensityMatrix(ComplexMatrix entries);

  static DensityMatrix from_pure(const ComplexVector& psi);

  Index dim() const { return entries_.rows(); }
  const ComplexMatrix& matrix() const { return entries_; }

  // Eigenvalues in ascending order.
  RealVector eigenvalues() const;

 private:
  ComplexMatrix entries_;
};

// Haar-distributed dim x dim unitary: QR of an i.i.d. complex Gaussian matrix
// with the phases of diag(R) moved into Q.
ComplexMatrix haar_unitary(Index dim, RandomStream& rng);

// First in_dim columns of a Haar unitary on out_dim.
ComplexMatrix haar_isometry(Index in_dim, Index out_dim, RandomStream& rng);

// Reduced state on the subsystems listed in `keep` (any order; the result
// keeps the original relative ordering). `keep` must be a nonempty proper
// subset of {0, ..., dims.size()-1}.
DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const Index> dims,
                            std::span<const Index> keep);

// Reduced state on the listed subsystems of a pure state, computed without
// forming the full density matrix.
DensityMatrix partial_trace_pure(const ComplexVector& psi, std::span<const Index> dims,
                                 std::span<const Index> keep);

// Largest singular value, via the largest eigenvalue of the smaller Gram matrix.
double operator_norm(const ComplexMatrix& m);

// Largest eigenvalue of a Hermitian matrix (== operator norm for PSD input).
double max_eigenvalue(const ComplexMatrix& hermitian);

// |<psi|phi>|^2 for unit vectors.
double fidelity(const ComplexVector& psi, const ComplexVector& phi);

// Sum of absolute eigenvalues of a Hermitian matrix.
double trace_norm(const ComplexMatrix& hermitian);

// Principal square root of a PSD matrix; eigenvalues in [-kStructuralTol, 0)
// are clamped to zero, anything more negative is rejected.
ComplexMatrix psd_sqrt(const ComplexMatrix& m);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexVector kron(const ComplexVector& a, const ComplexVector& b);

// (I_left (x) op) |psi>, where psi lives on C^left (x) C^op.cols(). op may be
// rectangular; the result lives on C^left (x) C^op.rows().
ComplexVector apply_right(const ComplexMatrix& op, const ComplexVector& psi, Index left);

// (op (x) I_right) |psi>, the mirror of apply_right.
ComplexVector apply_left(const ComplexMatrix& op, const ComplexVector& psi, Index right);

Index product(std::span<const Index> dims);

}  // namespace sdc
