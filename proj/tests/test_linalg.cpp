#include <doctest.h>

#include <cmath>
#include <numbers>

#include "sdc/linalg.hpp"
#include "test_helpers.hpp"

using namespace sdc;
using sdc::testing::gaussian_matrix;

namespace {

double unitarity_error(const ComplexMatrix& v) {
  return max_abs_diff(v.adjoint() * v, ComplexMatrix::Identity(v.cols(), v.cols()));
}

}  // namespace

TEST_CASE("random streams are reproducible and independent") {
  RandomStream a(42, 3), b(42, 3), c(42, 4);
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next_u64();
    CHECK(x == b.next_u64());
    differs |= x != c.next_u64();
  }
  CHECK(differs);
  CHECK(RandomStream(7).substream(5).stream_id() == RandomStream(7).substream(5).stream_id());
  CHECK(RandomStream(7).substream(5).stream_id() != RandomStream(7).substream(6).stream_id());

  RandomStream u(1);
  for (int i = 0; i < 1000; ++i) {
    const double x = u.uniform();
    REQUIRE(x >= 0.0);
    REQUIRE(x < 1.0);
    REQUIRE(u.uniform_index(7) < 7);
  }
  CHECK_THROWS_AS(u.uniform_index(0), std::invalid_argument);
}

TEST_CASE("complex gaussian has unit second moment") {
  RandomStream rng(11);
  const int n = 200000;
  double m2 = 0.0, re = 0.0;
  for (int i = 0; i < n; ++i) {
    const auto z = rng.complex_gaussian();
    m2 += std::norm(z);
    re += z.real();
  }
  // Var|z|^2 = 1 for a standard complex Gaussian.
  CHECK(std::abs(m2 / n - 1.0) < 4.0 / std::sqrt(double(n)));
  CHECK(std::abs(re / n) < 4.0 * std::sqrt(0.5 / n));
}

TEST_CASE("haar_unitary") {
  RandomStream rng(5);
  SUBCASE("dim 1 is a phase") {
    const auto u = haar_unitary(1, rng);
    REQUIRE(u.rows() == 1);
    CHECK(std::abs(std::abs(u(0, 0)) - 1.0) < 1e-12);
  }
  SUBCASE("unitary for every dim up to 64") {
    for (Index d = 1; d <= 64; ++d) {
      const auto u = haar_unitary(d, rng);
      REQUIRE(unitarity_error(u) < kStructuralTol);
      REQUIRE(max_abs_diff(u * u.adjoint(), ComplexMatrix::Identity(d, d)) < kStructuralTol);
    }
  }
  SUBCASE("bit-identical under identical streams") {
    RandomStream a(99, 2), b(99, 2);
    const auto ua = haar_unitary(6, a);
    const auto ub = haar_unitary(6, b);
    CHECK((ua.array() == ub.array()).all());
  }
  SUBCASE("zero dimension rejected") { CHECK_THROWS_AS(haar_unitary(0, rng), std::invalid_argument); }
}

TEST_CASE("haar_unitary first moment matches E|U11|^2 = 1/d") {
  // Oracle: for Haar U on C^d, |U_11|^2 ~ Beta(1, d-1): mean 1/d,
  // variance (d-1)/(d^2 (d+1)).
  for (Index d : {2, 3, 4}) {
    RandomStream base(2024, static_cast<std::uint64_t>(d));
    const int n = 20000;
    double sum = 0.0;
    for (int t = 0; t < n; ++t) {
      RandomStream rng = base.substream(static_cast<std::uint64_t>(t));
      sum += std::norm(haar_unitary(d, rng)(0, 0));
    }
    const double dd = static_cast<double>(d);
    const double sd = std::sqrt((dd - 1.0) / (dd * dd * (dd + 1.0)) / n);
    CHECK(std::abs(sum / n - 1.0 / dd) < 3.0 * sd);
  }
}

TEST_CASE("haar_isometry") {
  RandomStream rng(8);
  const auto v = haar_isometry(2, 8, rng);
  CHECK(v.rows() == 8);
  CHECK(v.cols() == 2);
  CHECK(unitarity_error(v) < kStructuralTol);

  ComplexVector x = ComplexVector::Random(2);
  x.normalize();
  CHECK(std::abs((v * x).norm() - 1.0) < kStructuralTol);

  SUBCASE("equals leading columns of a Haar unitary from the same stream") {
    RandomStream a(123), b(123);
    const auto iso = haar_isometry(3, 8, a);
    const auto full = haar_unitary(8, b);
    CHECK(max_abs_diff(iso, full.leftCols(3)) < 1e-12);
  }
  SUBCASE("square case is a unitary") {
    const auto u = haar_isometry(2, 2, rng);
    CHECK(max_abs_diff(u * u.adjoint(), ComplexMatrix::Identity(2, 2)) < kStructuralTol);
  }
  CHECK_THROWS_AS(haar_isometry(4, 2, rng), std::invalid_argument);
}

TEST_CASE("partial_trace") {
  SUBCASE("maximally entangled marginal is maximally mixed") {
    for (Index d : {2, 3, 5}) {
      ComplexVector phi = ComplexVector::Zero(d * d);
      for (Index i = 0; i < d; ++i) phi(i * d + i) = 1.0 / std::sqrt(double(d));
      const Index dims[] = {d, d};
      const Index keep_b[] = {1};
      const auto rho = partial_trace(DensityMatrix::from_pure(phi), dims, keep_b);
      CHECK(max_abs_diff(rho.matrix(), ComplexMatrix::Identity(d, d) / double(d)) < 1e-12);
    }
  }
  SUBCASE("product state") {
    ComplexVector psi = ComplexVector::Zero(4);
    psi(1) = 1.0;  // |0>|1>
    const Index dims[] = {2, 2};
    const Index keep_b[] = {1};
    const auto rho = partial_trace(DensityMatrix::from_pure(psi), dims, keep_b);
    ComplexMatrix expect = ComplexMatrix::Zero(2, 2);
    expect(1, 1) = 1.0;
    CHECK(max_abs_diff(rho.matrix(), expect) < 1e-14);
  }
  SUBCASE("marginal spectra agree with Schmidt coefficients") {
    // Oracle: singular values of the reshaped amplitude matrix.
    RandomStream rng(31);
    for (int trial = 0; trial < 20; ++trial) {
      const Index da = 2 + trial % 3, db = 2 + (trial / 3) % 3;
      ComplexVector psi = haar_isometry(1, da * db, rng).col(0);
      ComplexMatrix m(da, db);
      for (Index i = 0; i < da; ++i)
        for (Index j = 0; j < db; ++j) m(i, j) = psi(i * db + j);
      Eigen::JacobiSVD<ComplexMatrix> svd(m);
      RealVector schmidt = svd.singularValues().array().square();
      std::sort(schmidt.data(), schmidt.data() + schmidt.size());

      const Index dims[] = {da, db};
      const Index keep_a[] = {0}, keep_b[] = {1};
      const auto rho = DensityMatrix::from_pure(psi);
      RealVector ea = partial_trace(rho, dims, keep_a).eigenvalues();
      RealVector eb = partial_trace(rho, dims, keep_b).eigenvalues();
      const Index r = schmidt.size();
      for (Index k = 0; k < r; ++k) {
        CHECK(std::abs(ea(ea.size() - r + k) - schmidt(k)) < kStructuralTol);
        CHECK(std::abs(eb(eb.size() - r + k) - schmidt(k)) < kStructuralTol);
      }
    }
  }
  SUBCASE("tracing out in two steps equals one step; trace and positivity preserved") {
    RandomStream rng(77);
    for (int trial = 0; trial < 10; ++trial) {
      const Index dims[] = {2, 3, 2};
      ComplexVector psi = haar_isometry(1, 12, rng).col(0);
      const auto rho = DensityMatrix::from_pure(psi);
      const Index keep_bc[] = {1, 2};
      const Index keep_c_of_bc[] = {1};
      const Index dims_bc[] = {3, 2};
      const Index keep_c[] = {2};
      const auto two_step = partial_trace(partial_trace(rho, dims, keep_bc), dims_bc, keep_c_of_bc);
      const auto one_step = partial_trace(rho, dims, keep_c);
      CHECK(max_abs_diff(two_step.matrix(), one_step.matrix()) < kStructuralTol);
      CHECK(std::abs(one_step.matrix().trace() - Complex(1.0)) < kStructuralTol);
      CHECK(one_step.eigenvalues().minCoeff() >= -kStructuralTol);
      // Pure-state route agrees with the density-matrix route.
      const auto pure_route = partial_trace_pure(psi, dims, keep_c);
      CHECK(max_abs_diff(pure_route.matrix(), one_step.matrix()) < kStructuralTol);
    }
  }
  SUBCASE("errors") {
    const auto rho = DensityMatrix::from_pure(ComplexVector::Unit(4, 0));
    const Index bad_dims[] = {2, 3};
    const Index dims[] = {2, 2};
    const Index keep_b[] = {1};
    const Index keep_all[] = {0, 1};
    const Index keep_oob[] = {2};
    CHECK_THROWS_AS(partial_trace(rho, bad_dims, keep_b), std::invalid_argument);
    CHECK_THROWS_AS(partial_trace(rho, dims, keep_all), std::invalid_argument);
    CHECK_THROWS_AS(partial_trace(rho, dims, std::span<const Index>{}), std::invalid_argument);
    CHECK_THROWS_AS(partial_trace(rho, dims, keep_oob), std::invalid_argument);
  }
}

TEST_CASE("DensityMatrix invariants") {
  ComplexMatrix m = ComplexMatrix::Identity(2, 2);
  CHECK_THROWS_AS(DensityMatrix{m}, std::invalid_argument);  // trace 2
  m(0, 1) = 0.1;
  CHECK_THROWS_AS(DensityMatrix{m / 2.0}, std::invalid_argument);  // not Hermitian
  ComplexMatrix neg(2, 2);
  neg << 1.5, 0, 0, -0.5;
  CHECK_THROWS_AS(DensityMatrix{neg}, std::invalid_argument);
  CHECK_NOTHROW(DensityMatrix{ComplexMatrix::Identity(3, 3) / 3.0});
}

TEST_CASE("operator_norm") {
  CHECK(std::abs(operator_norm(ComplexMatrix::Identity(5, 5)) - 1.0) < 1e-14);
  ComplexMatrix diag = ComplexMatrix::Zero(2, 2);
  diag(0, 0) = 3.0;
  diag(1, 1) = 0.5;
  CHECK(std::abs(operator_norm(diag) - 3.0) < 1e-14);

  RandomStream rng(4);
  for (int trial = 0; trial < 50; ++trial) {
    const Index r = 1 + trial % 6, c = 1 + (trial / 6) % 6;
    const ComplexMatrix m = gaussian_matrix(r, c, rng);
    // Oracle: dense SVD.
    const double svd_max = Eigen::JacobiSVD<ComplexMatrix>(m).singularValues()(0);
    CHECK(std::abs(operator_norm(m) - svd_max) <= 1e-10 * svd_max);
    const Complex alpha(-2.5, 1.25);
    CHECK(std::abs(operator_norm(alpha * m) - std::abs(alpha) * operator_norm(m)) <=
          1e-9 * std::abs(alpha) * svd_max);
  }
  ComplexMatrix bad = ComplexMatrix::Identity(2, 2);
  bad(0, 0) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(operator_norm(bad), std::invalid_argument);
}

TEST_CASE("fidelity") {
  const ComplexVector zero = ComplexVector::Unit(2, 0);
  const ComplexVector one = ComplexVector::Unit(2, 1);
  ComplexVector plus(2);
  plus << 1.0 / std::numbers::sqrt2, 1.0 / std::numbers::sqrt2;
  CHECK(fidelity(zero, zero) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(fidelity(zero, one) == 0.0);
  CHECK(fidelity(plus, zero) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK_THROWS_AS(fidelity(zero, ComplexVector::Unit(3, 0)), std::invalid_argument);
  CHECK_THROWS_AS(fidelity(zero, 2.0 * one), std::invalid_argument);
}

TEST_CASE("psd_sqrt, kron and factor application") {
  RandomStream rng(12);
  const ComplexMatrix g = gaussian_matrix(4, 4, rng);
  const ComplexMatrix psd = g * g.adjoint();
  const ComplexMatrix s = psd_sqrt(psd);
  CHECK(max_abs_diff(s * s, psd) < 1e-10);
  CHECK(max_abs_diff(s, s.adjoint()) < 1e-12);

  ComplexMatrix neg = -ComplexMatrix::Identity(2, 2);
  CHECK_THROWS_AS(psd_sqrt(neg), std::invalid_argument);

  const ComplexMatrix a = gaussian_matrix(2, 3, rng);
  const ComplexMatrix b = gaussian_matrix(3, 2, rng);
  const ComplexVector psi = gaussian_matrix(6, 1, rng).col(0);
  // (I_2 (x) b) psi and (a (x) I_2) psi against explicit Kronecker products.
  CHECK(max_abs_diff(apply_right(b, psi.head(4), 2), kron(ComplexMatrix::Identity(2, 2), b) * psi.head(4)) < 1e-12);
  CHECK(max_abs_diff(apply_left(a, psi, 2), kron(a, ComplexMatrix::Identity(2, 2)) * psi) < 1e-12);
  CHECK(kron(a, b).rows() == 6);
  CHECK(kron(a, b)(1 * 3 + 2, 2 * 2 + 1) == a(1, 2) * b(2, 1));
}
