#include "sdc/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace sdc {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

// Row-major strides for the given factor dimensions.
std::vector<Index> strides_of(std::span<const Index> dims) {
  std::vector<Index> strides(dims.size(), 1);
  for (std::size_t i = dims.size(); i-- > 1;) strides[i - 1] = strides[i] * dims[i];
  return strides;
}

// table[k * traced + t] = flat index of the basis vector whose kept digits
// encode k and traced digits encode t (both row-major in original order).
struct Split {
  Index kept_dim = 1;
  Index traced_dim = 1;
  std::vector<Index> table;
};

Split split_subsystems(std::span<const Index> dims, std::span<const Index> keep) {
  require(!dims.empty(), "partial_trace: empty dimension list");
  for (Index d : dims) require(d >= 1, "partial_trace: subsystem dimension must be >= 1");
  std::vector<bool> kept(dims.size(), false);
  for (Index k : keep) {
    require(k >= 0 && static_cast<std::size_t>(k) < dims.size(),
            "partial_trace: subsystem index out of range");
    require(!kept[static_cast<std::size_t>(k)], "partial_trace: duplicate subsystem index");
    kept[static_cast<std::size_t>(k)] = true;
  }
  require(!keep.empty() && keep.size() < dims.size(),
          "partial_trace: keep must be a nonempty proper subset");

  std::vector<Index> kept_dims, traced_dims, kept_strides, traced_strides;
  const auto strides = strides_of(dims);
  for (std::size_t i = 0; i < dims.size(); ++i) {
    (kept[i] ? kept_dims : traced_dims).push_back(dims[i]);
    (kept[i] ? kept_strides : traced_strides).push_back(strides[i]);
  }

  // Flat offsets contributed by each value of a group's multi-index.
  auto offsets = [](const std::vector<Index>& ds, const std::vector<Index>& ss) {
    std::vector<Index> out{0};
    for (std::size_t i = 0; i < ds.size(); ++i) {
      std::vector<Index> next;
      next.reserve(out.size() * static_cast<std::size_t>(ds[i]));
      for (Index base : out)
        for (Index v = 0; v < ds[i]; ++v) next.push_back(base + v * ss[i]);
      out = std::move(next);
    }
    return out;
  };
  const auto kept_off = offsets(kept_dims, kept_strides);
  const auto traced_off = offsets(traced_dims, traced_strides);

  Split s;
  s.kept_dim = static_cast<Index>(kept_off.size());
  s.traced_dim = static_cast<Index>(traced_off.size());
  s.table.reserve(kept_off.size() * traced_off.size());
  for (Index k : kept_off)
    for (Index t : traced_off) s.table.push_back(k + t);
  return s;
}

}  // namespace

bool all_finite(const ComplexMatrix& m) {
  return m.unaryExpr([](const Complex& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); })
      .all();
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  require(a.rows() == b.rows() && a.cols() == b.cols(), "max_abs_diff: shape mismatch");
  if (a.size() == 0) return 0.0;
  return (a - b).cwiseAbs().maxCoeff();
}

DensityMatrix::DensityMatrix(ComplexMatrix entries) : entries_(std::move(entries)) {
  require(entries_.rows() >= 1 && entries_.rows() == entries_.cols(),
          "DensityMatrix: matrix must be square and nonempty");
  require(all_finite(entries_), "DensityMatrix: non-finite entry");
  require(max_abs_diff(entries_, entries_.adjoint()) <= kStructuralTol,
          "DensityMatrix: matrix is not Hermitian");
  const Complex tr = entries_.trace();
  require(std::abs(tr - Complex(1.0, 0.0)) <= kStructuralTol, "DensityMatrix: trace is not 1");
  require(eigenvalues().minCoeff() >= -kStructuralTol, "DensityMatrix: negative eigenvalue");
}

DensityMatrix DensityMatrix::from_pure(const ComplexVector& psi) {
  return DensityMatrix(psi * psi.adjoint());
}

RealVector DensityMatrix::eigenvalues() const {
  return Eigen::SelfAdjointEigenSolver<ComplexMatrix>(entries_, Eigen::EigenvaluesOnly)
      .eigenvalues();
}

ComplexMatrix haar_unitary(Index dim, RandomStream& rng) {
  require(dim >= 1, "haar_unitary: dimension must be >= 1");
  return haar_isometry(dim, dim, rng);
}

ComplexMatrix haar_isometry(Index in_dim, Index out_dim, RandomStream& rng) {
  require(in_dim >= 1, "haar_isometry: input dimension must be >= 1");
  require(out_dim >= in_dim, "haar_isometry: output dimension must be >= input dimension");

  // Column-by-column draws: the first c columns of G are the same whatever
  // in_dim is, and so are the first c columns of Q.
  ComplexMatrix g(out_dim, in_dim);
  for (Index j = 0; j < in_dim; ++j)
    for (Index i = 0; i < out_dim; ++i) g(i, j) = rng.complex_gaussian();

  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(out_dim, in_dim);
  const auto& r = qr.matrixQR();
  for (Index j = 0; j < in_dim; ++j) {
    const double mag = std::abs(r(j, j));
    // A zero pivot has probability zero; keep the column as is if it happens.
    if (mag > 0.0) q.col(j) *= r(j, j) / mag;
  }
  return q;
}

DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const Index> dims,
                            std::span<const Index> keep) {
  const Split s = split_subsystems(dims, keep);
  require(product(dims) == rho.dim(), "partial_trace: dimensions do not match the state");
  const ComplexMatrix& m = rho.matrix();
  ComplexMatrix out = ComplexMatrix::Zero(s.kept_dim, s.kept_dim);
  for (Index a = 0; a < s.kept_dim; ++a)
    for (Index b = 0; b < s.kept_dim; ++b) {
      Complex acc = 0.0;
      for (Index t = 0; t < s.traced_dim; ++t)
        acc += m(s.table[a * s.traced_dim + t], s.table[b * s.traced_dim + t]);
      out(a, b) = acc;
    }
  return DensityMatrix(std::move(out));
}

DensityMatrix partial_trace_pure(const ComplexVector& psi, std::span<const Index> dims,
                                 std::span<const Index> keep) {
  const Split s = split_subsystems(dims, keep);
  require(product(dims) == psi.size(), "partial_trace: dimensions do not match the state");
  ComplexMatrix m(s.kept_dim, s.traced_dim);
  for (Index a = 0; a < s.kept_dim; ++a)
    for (Index t = 0; t < s.traced_dim; ++t) m(a, t) = psi(s.table[a * s.traced_dim + t]);
  return DensityMatrix(m * m.adjoint());
}

double max_eigenvalue(const ComplexMatrix& hermitian) {
  require(hermitian.rows() == hermitian.cols(), "max_eigenvalue: matrix must be square");
  if (hermitian.size() == 0) return 0.0;
  return Eigen::SelfAdjointEigenSolver<ComplexMatrix>(hermitian, Eigen::EigenvaluesOnly)
      .eigenvalues()
      .maxCoeff();
}

double operator_norm(const ComplexMatrix& m) {
  require(all_finite(m), "operator_norm: non-finite entry");
  if (m.size() == 0) return 0.0;
  const ComplexMatrix gram = m.rows() < m.cols() ? ComplexMatrix(m * m.adjoint())
                                                 : ComplexMatrix(m.adjoint() * m);
  return std::sqrt(std::max(0.0, max_eigenvalue(gram)));
}

double fidelity(const ComplexVector& psi, const ComplexVector& phi) {
  require(psi.size() == phi.size(), "fidelity: vectors differ in length");
  require(std::abs(psi.norm() - 1.0) <= kNormalizationTol &&
              std::abs(phi.norm() - 1.0) <= kNormalizationTol,
          "fidelity: vectors must be normalized");
  return std::clamp(std::norm(psi.dot(phi)), 0.0, 1.0);
}

double trace_norm(const ComplexMatrix& hermitian) {
  require(hermitian.rows() == hermitian.cols(), "trace_norm: matrix must be square");
  if (hermitian.size() == 0) return 0.0;
  return Eigen::SelfAdjointEigenSolver<ComplexMatrix>(hermitian, Eigen::EigenvaluesOnly)
      .eigenvalues()
      .cwiseAbs()
      .sum();
}

ComplexMatrix psd_sqrt(const ComplexMatrix& m) {
  require(m.rows() == m.cols(), "psd_sqrt: matrix must be square");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m);
  RealVector ev = es.eigenvalues();
  require(ev.size() == 0 || ev.minCoeff() >= -kStructuralTol,
          "psd_sqrt: matrix is not positive semidefinite");
  ev = ev.cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

ComplexVector kron(const ComplexVector& a, const ComplexVector& b) {
  ComplexVector out(a.size() * b.size());
  for (Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

ComplexVector apply_right(const ComplexMatrix& op, const ComplexVector& psi, Index left) {
  require(left >= 1 && psi.size() == left * op.cols(),
          "apply_right: state dimension does not match the operator");
  // Row-major reshape: row a holds the amplitudes with left index a.
  Eigen::Map<const Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>
      in(psi.data(), left, op.cols());
  Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> out =
      in * op.transpose();
  return Eigen::Map<const ComplexVector>(out.data(), out.size());
}

ComplexVector apply_left(const ComplexMatrix& op, const ComplexVector& psi, Index right) {
  require(right >= 1 && psi.size() == op.cols() * right,
          "apply_left: state dimension does not match the operator");
  Eigen::Map<const Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>
      in(psi.data(), op.cols(), right);
  Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> out = op * in;
  return Eigen::Map<const ComplexVector>(out.data(), out.size());
}

Index product(std::span<const Index> dims) {
  return std::accumulate(dims.begin(), dims.end(), Index{1}, std::multiplies<>());
}

}  // namespace sdc
