#include <doctest.h>

#include <cmath>

#include "sdc/states.hpp"

using namespace sdc;

namespace {

// sqrt(a)|00> + sqrt(1-a)|11>
PureState schmidt_pair(double a) {
  ComplexVector v = ComplexVector::Zero(4);
  v(0) = std::sqrt(a);
  v(3) = std::sqrt(1.0 - a);
  return PureState(v, {2, 2});
}

}  // namespace

TEST_CASE("max_entangled") {
  const auto phi2 = max_entangled(2);
  CHECK(phi2.partition() == Partition{2, 2});
  CHECK(std::abs(phi2.amplitudes()(0) - 1.0 / std::sqrt(2.0)) < 1e-15);
  CHECK(std::abs(phi2.amplitudes()(3) - 1.0 / std::sqrt(2.0)) < 1e-15);
  CHECK(phi2.amplitudes()(1) == Complex(0.0));

  const auto phi1 = max_entangled(1);
  CHECK(phi1.dim() == 1);
  CHECK(phi1.amplitudes()(0) == Complex(1.0));

  const Index dims[] = {4, 4};
  const Index keep_a[] = {0}, keep_b[] = {1};
  const auto rho = max_entangled(4).density();
  CHECK(max_abs_diff(partial_trace(rho, dims, keep_a).matrix(), ComplexMatrix::Identity(4, 4) / 4.0) < 1e-14);
  CHECK(max_abs_diff(partial_trace(rho, dims, keep_b).matrix(), ComplexMatrix::Identity(4, 4) / 4.0) < 1e-14);
  CHECK_THROWS_AS(max_entangled(0), std::invalid_argument);
}

TEST_CASE("PureState validation") {
  CHECK_THROWS_AS(PureState(ComplexVector::Unit(4, 0), {2, 3}), std::invalid_argument);
  CHECK_THROWS_AS(PureState(2.0 * ComplexVector::Unit(4, 0), {2, 2}), std::invalid_argument);
  CHECK_THROWS_AS(PureState(ComplexVector::Unit(4, 0), {}), std::invalid_argument);
  // Within the normalization tolerance the state is accepted and rescaled.
  const PureState almost((1.0 + 5e-9) * ComplexVector::Unit(4, 0), {2, 2});
  CHECK(std::abs(almost.amplitudes().norm() - 1.0) < 1e-15);
}

TEST_CASE("encoding_matrix and state_from_encoding") {
  CHECK(max_abs_diff(encoding_matrix(max_entangled(3)).entries(), ComplexMatrix::Identity(3, 3)) < 1e-14);

  // Oracle: x_ij = sqrt(d) psi_ij with psi = |00>.
  ComplexMatrix expect = ComplexMatrix::Zero(2, 2);
  expect(0, 0) = std::sqrt(2.0);
  CHECK(max_abs_diff(encoding_matrix(zero_state({2, 2})).entries(), expect) < 1e-15);

  // Oracle: (X (x) I)|Phi_2> computed by explicit matrix-vector product.
  const EncodingMatrix x(expect);
  const ComplexVector direct = kron(expect, ComplexMatrix(ComplexMatrix::Identity(2, 2))) *
                               max_entangled(2).amplitudes();
  const auto built = state_from_encoding(x, 2);
  CHECK(max_abs_diff(built.amplitudes(), direct) < 1e-15);
  CHECK(max_abs_diff(built.amplitudes(), ComplexVector::Unit(4, 0)) < 1e-15);

  CHECK(max_abs_diff(state_from_encoding(EncodingMatrix(ComplexMatrix::Identity(3, 3)), 3).amplitudes(),
                     max_entangled(3).amplitudes()) < 1e-15);

  SUBCASE("round trip and Frobenius invariant on random states, including rectangular") {
    RandomStream rng(17);
    for (int i = 0; i < 100; ++i) {
      const Index d_out = 2 + i % 5, d = 2 + (i / 5) % 4;
      const auto psi = random_state({d_out, d}, rng);
      const auto x = encoding_matrix(psi);
      CHECK(std::abs(x.entries().squaredNorm() - double(d)) < 1e-8);
      CHECK(max_abs_diff(state_from_encoding(x, d).amplitudes(), psi.amplitudes()) < 1e-10);
    }
  }
  SUBCASE("unitary encoding keeps B maximally mixed") {
    RandomStream rng(18);
    const ComplexMatrix u = haar_unitary(4, rng) * 1.0;
    const auto psi = state_from_encoding(EncodingMatrix(u), 4);
    CHECK(max_abs_diff(reduced_b(psi).matrix(), ComplexMatrix::Identity(4, 4) / 4.0) < 1e-12);
  }
  CHECK_THROWS_AS(encoding_matrix(zero_state({2, 2, 2})), std::invalid_argument);
  CHECK_THROWS_AS(state_from_encoding(EncodingMatrix(ComplexMatrix::Identity(2, 2)), 3),
                  std::invalid_argument);
  CHECK_THROWS_AS(EncodingMatrix(ComplexMatrix::Zero(2, 2)), std::invalid_argument);
}

TEST_CASE("reduced_b agrees with the generic partial trace") {
  CHECK(max_abs_diff(reduced_b(max_entangled(3)).matrix(), ComplexMatrix::Identity(3, 3) / 3.0) < 1e-14);
  ComplexMatrix zero_proj = ComplexMatrix::Zero(2, 2);
  zero_proj(0, 0) = 1.0;
  CHECK(max_abs_diff(reduced_b(zero_state({2, 2})).matrix(), zero_proj) < 1e-15);

  RandomStream rng(19);
  for (int i = 0; i < 50; ++i) {
    const Index da = 2 + i % 4, db = 2 + (i / 4) % 4;
    const auto psi = random_state({da, db}, rng);
    const Index dims[] = {da, db};
    const Index keep_b[] = {1};
    CHECK(max_abs_diff(reduced_b(psi).matrix(), partial_trace(psi.density(), dims, keep_b).matrix()) <
          kStructuralTol);
  }
  CHECK_THROWS_AS(reduced_b(zero_state({2})), std::invalid_argument);
}

TEST_CASE("flatness_epsilon") {
  CHECK(flatness_epsilon(max_entangled(4)) == doctest::Approx(0.0).epsilon(1e-12));
  for (Index d : {2, 3, 8}) CHECK(flatness_epsilon(zero_state({d, d})) == doctest::Approx(double(d - 1)));
  // Oracle: rho_B = diag(0.8, 0.2) so eps = 2 * 0.8 - 1.
  CHECK(flatness_epsilon(schmidt_pair(0.8)) == doctest::Approx(0.6).epsilon(1e-12));

  RandomStream rng(20);
  for (int i = 0; i < 50; ++i) {
    const Index d = 2 + i % 6;
    const double eps = flatness_epsilon(random_state({d + 1, d}, rng));
    CHECK(eps >= 0.0);
    CHECK(eps <= double(d - 1) + 1e-9);
  }
}

TEST_CASE("random states") {
  RandomStream rng(21);
  CHECK(std::abs(random_state({2, 2}, rng).amplitudes().norm() - 1.0) < 1e-10);
  for (Index d : {2, 4, 7}) {
    const auto p = random_product_state({d, d}, rng);
    CHECK(flatness_epsilon(p) == doctest::Approx(double(d - 1)).epsilon(1e-9));
  }
  CHECK_THROWS_AS(random_state({}, rng), std::invalid_argument);
  CHECK_THROWS_AS(random_product_state({}, rng), std::invalid_argument);
}

TEST_CASE("random states concentrate near flat when the A side is large") {
  // Monte Carlo oracle: mean flatness over 1000 draws. At d_A = d_B = d the
  // top eigenvalue of rho_B tends to 4/d, so epsilon itself does not shrink;
  // only its fraction of the product-state value d - 1 does. With d_B fixed
  // and d_A growing, epsilon falls towards 0.
  auto mean_eps = [](Index d_a, Index d_b) {
    RandomStream base(5150, static_cast<std::uint64_t>(d_a * 100 + d_b));
    double sum = 0.0;
    for (int t = 0; t < 1000; ++t) {
      RandomStream rng = base.substream(static_cast<std::uint64_t>(t));
      sum += flatness_epsilon(random_state({d_a, d_b}, rng));
    }
    return sum / 1000.0;
  };
  const double sq4 = mean_eps(4, 4), sq8 = mean_eps(8, 8), sq16 = mean_eps(16, 16);
  CHECK(sq8 < 0.5 * 7.0);
  CHECK(sq4 / 3.0 > sq8 / 7.0);
  CHECK(sq8 / 7.0 > sq16 / 15.0);

  const double a4 = mean_eps(4, 4), a16 = mean_eps(16, 4), a64 = mean_eps(64, 4);
  CHECK(a4 > a16);
  CHECK(a16 > a64);
  CHECK(a64 < 1.0);
}

TEST_CASE("state JSON") {
  RandomStream rng(22);
  const auto psi = random_state({2, 3}, rng);
  const auto back = pure_state_from_json(nlohmann::json::parse(to_json(psi).dump()));
  CHECK(back.partition() == psi.partition());
  CHECK((back.amplitudes().array() == psi.amplitudes().array()).all());

  CHECK_THROWS_AS(pure_state_from_json(nlohmann::json::parse(R"({"partition":[2]})")),
                  std::invalid_argument);
  CHECK_THROWS_AS(pure_state_from_json(nlohmann::json::parse(
                      R"({"partition":[2],"amplitudes":[[1,0],[0]]})")),
                  std::invalid_argument);
  CHECK_THROWS_AS(pure_state_from_json(nlohmann::json::parse(
                      R"({"partition":[3],"amplitudes":[[1,0],[0,0]]})")),
                  std::invalid_argument);
}
