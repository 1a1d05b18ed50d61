#include "sdc/states.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sdc {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

void require_bipartite(const PureState& psi, const char* op) {
  if (!psi.is_bipartite())
    throw std::invalid_argument(std::string(op) + ": state must be bipartite");
}

}  // namespace

PureState::PureState(ComplexVector amplitudes, Partition partition)
    : amplitudes_(std::move(amplitudes)), partition_(std::move(partition)) {
  require(!partition_.empty(), "PureState: empty partition");
  for (Index d : partition_) require(d >= 1, "PureState: subsystem dimension must be >= 1");
  require(product(partition_) == amplitudes_.size(),
          "PureState: partition does not match the amplitude count");
  require(all_finite(amplitudes_), "PureState: non-finite amplitude");
  const double norm = amplitudes_.norm();
  require(std::abs(norm - 1.0) <= kNormalizationTol, "PureState: amplitudes are not normalized");
  amplitudes_ /= norm;
}

EncodingMatrix::EncodingMatrix(ComplexMatrix entries) : entries_(std::move(entries)) {
  require(entries_.rows() >= 1 && entries_.cols() >= 1, "EncodingMatrix: empty matrix");
  require(all_finite(entries_), "EncodingMatrix: non-finite entry");
  require(std::abs(entries_.squaredNorm() - static_cast<double>(entries_.cols())) <=
              kNormalizationTol,
          "EncodingMatrix: squared Frobenius norm must equal the input dimension");
}

PureState max_entangled(Index d) {
  require(d >= 1, "max_entangled: dimension must be >= 1");
  ComplexVector v = ComplexVector::Zero(d * d);
  const double a = 1.0 / std::sqrt(static_cast<double>(d));
  for (Index i = 0; i < d; ++i) v(i * d + i) = a;
  return PureState(std::move(v), {d, d});
}

PureState zero_state(const Partition& partition) {
  require(!partition.empty(), "zero_state: empty partition");
  ComplexVector v = ComplexVector::Zero(product(partition));
  v(0) = 1.0;
  return PureState(std::move(v), partition);
}

PureState tensor(const PureState& a, const PureState& b) {
  Partition p = a.partition();
  p.insert(p.end(), b.partition().begin(), b.partition().end());
  return PureState(kron(a.amplitudes(), b.amplitudes()), std::move(p));
}

EncodingMatrix encoding_matrix(const PureState& psi) {
  require_bipartite(psi, "encoding_matrix");
  const Index d_out = psi.partition()[0];
  const Index d = psi.partition()[1];
  const double scale = std::sqrt(static_cast<double>(d));
  ComplexMatrix x(d_out, d);
  for (Index i = 0; i < d_out; ++i)
    for (Index j = 0; j < d; ++j) x(i, j) = scale * psi.amplitudes()(i * d + j);
  return EncodingMatrix(std::move(x));
}

PureState state_from_encoding(const EncodingMatrix& x, Index d) {
  require(x.d_in() == d, "state_from_encoding: encoding matrix input dimension must equal d");
  // (X (x) I) sum_k |k>|k> / sqrt d = sum_ij x_ij |i>|j> / sqrt d.
  const double scale = 1.0 / std::sqrt(static_cast<double>(d));
  ComplexVector v(x.d_out() * d);
  for (Index i = 0; i < x.d_out(); ++i)
    for (Index j = 0; j < d; ++j) v(i * d + j) = scale * x.entries()(i, j);
  return PureState(std::move(v), {x.d_out(), d});
}

DensityMatrix reduced_b(const PureState& psi) {
  require_bipartite(psi, "reduced_b");
  const EncodingMatrix enc = encoding_matrix(psi);
  const ComplexMatrix& x = enc.entries();
  const double d = static_cast<double>(x.cols());
  ComplexMatrix rho = x.transpose() * x.conjugate() / d;
  // Exact Hermitian symmetry; the product above is Hermitian only up to rounding.
  rho = (0.5 * (rho + rho.adjoint())).eval();
  return DensityMatrix(std::move(rho));
}

double flatness_epsilon(const PureState& psi) {
  const DensityMatrix rho = reduced_b(psi);
  const double eps = static_cast<double>(rho.dim()) * rho.eigenvalues().maxCoeff() - 1.0;
  return std::max(0.0, eps);
}

PureState random_state(const Partition& partition, RandomStream& rng) {
  require(!partition.empty(), "random_state: empty partition");
  const Index dim = product(partition);
  require(dim >= 1, "random_state: invalid partition");
  return PureState(haar_isometry(1, dim, rng).col(0), partition);
}

PureState random_product_state(const Partition& partition, RandomStream& rng) {
  require(!partition.empty(), "random_product_state: empty partition");
  ComplexVector v = ComplexVector::Ones(1);
  for (Index d : partition) v = kron(v, ComplexVector(haar_isometry(1, d, rng).col(0)));
  return PureState(std::move(v), partition);
}

nlohmann::json to_json(const PureState& psi) {
  nlohmann::json amps = nlohmann::json::array();
  for (Index i = 0; i < psi.dim(); ++i)
    amps.push_back({psi.amplitudes()(i).real(), psi.amplitudes()(i).imag()});
  return {{"partition", psi.partition()}, {"amplitudes", std::move(amps)}};
}

PureState pure_state_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("partition") || !j.contains("amplitudes"))
    throw std::invalid_argument("state JSON must have 'partition' and 'amplitudes'");
  const auto& jp = j.at("partition");
  const auto& ja = j.at("amplitudes");
  if (!jp.is_array() || !ja.is_array())
    throw std::invalid_argument("state JSON: 'partition' and 'amplitudes' must be arrays");
  Partition partition;
  for (const auto& d : jp) {
    if (!d.is_number_integer()) throw std::invalid_argument("state JSON: non-integer dimension");
    partition.push_back(d.get<Index>());
  }
  ComplexVector v(static_cast<Index>(ja.size()));
  for (std::size_t i = 0; i < ja.size(); ++i) {
    const auto& z = ja[i];
    if (!z.is_array() || z.size() != 2 || !z[0].is_number() || !z[1].is_number())
      throw std::invalid_argument("state JSON: amplitudes must be [re, im] pairs");
    v(static_cast<Index>(i)) = Complex(z[0].get<double>(), z[1].get<double>());
  }
  return PureState(std::move(v), std::move(partition));
}

}  // namespace sdc
