#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "qlsp/error.hpp"
#include "qlsp/linalg.hpp"

using namespace qlsp;

namespace {

ComplexMatrix random_matrix(Index n, std::mt19937& rng) {
  std::normal_distribution<double> g;
  ComplexMatrix m(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) m(i, j) = Complex(g(rng), g(rng));
  return m;
}

ComplexMatrix random_hermitian(Index n, std::mt19937& rng) { return hermitian_part(random_matrix(n, rng)); }

StateVector random_state(Index n, std::mt19937& rng) {
  std::normal_distribution<double> g;
  StateVector v(n);
  for (Index i = 0; i < n; ++i) v(i) = Complex(g(rng), g(rng));
  return v.normalized();
}

}  // namespace

TEST_CASE("eigendecomposition of a real diagonal matrix") {
  ComplexMatrix h = ComplexMatrix::Zero(2, 2);
  h(0, 0) = 1.0;
  h(1, 1) = -1.0;
  const auto eig = hermitian_eigendecompose(h);
  CHECK(eig.eigenvalues(0) == doctest::Approx(-1.0));
  CHECK(eig.eigenvalues(1) == doctest::Approx(1.0));
  CHECK(std::abs(eig.eigenvectors(1, 0)) == doctest::Approx(1.0));
  CHECK(std::abs(eig.eigenvectors(0, 1)) == doctest::Approx(1.0));
}

TEST_CASE("pauli x eigenpairs") {
  const auto eig = hermitian_eigendecompose(pauli::x());
  CHECK(eig.eigenvalues(0) == doctest::Approx(-1.0));
  CHECK(eig.eigenvalues(1) == doctest::Approx(1.0));
  StateVector plus(2);
  plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  CHECK(oracle::overlap2(eig.eigenvectors.col(1), plus) == doctest::Approx(1.0));
}

TEST_CASE("eigendecomposition reconstructs random hermitian matrices") {
  std::mt19937 rng(7);
  for (Index n : {3, 8, 20}) {
    const ComplexMatrix h = random_hermitian(n, rng);
    const auto eig = hermitian_eigendecompose(h);
    const ComplexMatrix v = eig.eigenvectors;
    const ComplexMatrix rec = v * eig.eigenvalues.cast<Complex>().asDiagonal() * v.adjoint();
    CHECK((rec - h).norm() < 1e-11 * n);
    CHECK((v.adjoint() * v - ComplexMatrix::Identity(n, n)).norm() < 1e-12 * n);
    const auto ref = oracle::hermitian_eigenvalues(h);
    for (Index k = 0; k < n; ++k) CHECK(eig.eigenvalues(k) == doctest::Approx(ref[k]).epsilon(1e-10));
    for (Index k = 1; k < n; ++k) CHECK(eig.eigenvalues(k) >= eig.eigenvalues(k - 1));
  }
}

TEST_CASE("eigendecomposition rejects non hermitian and non square input") {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 1) = 1.0;
  CHECK_THROWS_AS(hermitian_eigendecompose(m), Error);
  try {
    hermitian_eigendecompose(m);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kNotHermitian);
  }
  try {
    hermitian_eigendecompose(ComplexMatrix::Zero(2, 3));
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kNotSquare);
  }
}

TEST_CASE("qr of the identity is the identity") {
  const ComplexMatrix q = qr_orthonormalize(ComplexMatrix::Identity(5, 5));
  CHECK((q - ComplexMatrix::Identity(5, 5)).norm() < 1e-14);
}

TEST_CASE("qr gives a unitary with a nonnegative real R diagonal") {
  std::mt19937 rng(11);
  const ComplexMatrix m = random_matrix(9, rng);
  const ComplexMatrix q = qr_orthonormalize(m);
  CHECK((q.adjoint() * q - ComplexMatrix::Identity(9, 9)).norm() < 1e-12);
  const ComplexMatrix r = q.adjoint() * m;
  for (Index i = 0; i < 9; ++i) {
    CHECK(r(i, i).real() > 0.0);
    CHECK(std::abs(r(i, i).imag()) < 1e-12);
    for (Index j = 0; j < i; ++j) CHECK(std::abs(r(i, j)) < 1e-11);
  }
}

TEST_CASE("qr rank handling") {
  ComplexMatrix m = ComplexMatrix::Identity(3, 3);
  m.col(2) = m.col(0) + m.col(1);
  try {
    qr_orthonormalize(m);
    FAIL("expected RankDeficient");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kRankDeficient);
  }
  const ComplexMatrix q = qr_orthonormalize(m, RankPolicy::kComplete);
  CHECK((q.adjoint() * q - ComplexMatrix::Identity(3, 3)).norm() < 1e-12);
  // the first two columns still span the range of m
  const ComplexMatrix r = q.adjoint() * m;
  CHECK(r.row(2).norm() < 1e-12);
}

TEST_CASE("apply_exp matches a Taylor series exponential") {
  std::mt19937 rng(3);
  const ComplexMatrix h = random_hermitian(6, rng);
  const auto eig = hermitian_eigendecompose(h);
  const StateVector psi = random_state(6, rng);
  for (double tau : {0.0, 0.1, 1.7, -2.3}) {
    const StateVector got = apply_exp(eig, tau, psi);
    const StateVector ref = oracle::expm_minus_i(h, tau) * psi;
    CHECK((got - ref).norm() < 1e-11);
  }
}

TEST_CASE("apply_exp of zero hamiltonian is the identity") {
  std::mt19937 rng(5);
  const auto eig = hermitian_eigendecompose(ComplexMatrix::Zero(4, 4));
  const StateVector psi = random_state(4, rng);
  CHECK((apply_exp(eig, 3.0, psi) - psi).norm() < 1e-15);
}

TEST_CASE("apply_exp preserves the norm") {
  std::mt19937 rng(9);
  const ComplexMatrix h = random_hermitian(16, rng);
  const auto eig = hermitian_eigendecompose(h);
  StateVector psi = random_state(16, rng);
  CHECK(std::abs(apply_exp(eig, 0.7, psi).norm() - 1.0) < 1e-12);
  for (int k = 0; k < 100000; ++k) psi = apply_exp(eig, 0.2, psi);
  CHECK(std::abs(psi.norm() - 1.0) < 1e-8);
}

TEST_CASE("solve_linear agrees with an independent elimination") {
  std::mt19937 rng(13);
  const ComplexMatrix a = random_matrix(12, rng);
  const StateVector b = random_state(12, rng);
  const StateVector x = solve_linear(a, b);
  const StateVector ref = oracle::solve(a, b).normalized();
  CHECK(std::abs(x.norm() - 1.0) < 1e-12);
  CHECK(oracle::overlap2(x, ref) == doctest::Approx(1.0).epsilon(1e-12));
  // same direction, not just same ray
  CHECK((x - ref).norm() < 1e-10);
  try {
    solve_linear(ComplexMatrix::Zero(2, 2), StateVector::Ones(2));
    FAIL("expected Singular");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kSingular);
  }
}

TEST_CASE("singular values and condition number") {
  ComplexMatrix d = ComplexMatrix::Zero(3, 3);
  d(0, 0) = 1.0;
  d(1, 1) = Complex(0.0, -0.5);
  d(2, 2) = 0.1;
  CHECK(spectral_norm(d) == doctest::Approx(1.0));
  CHECK(condition_number(d) == doctest::Approx(10.0));
  const RealVector s = singular_values(d);
  CHECK(s(0) == doctest::Approx(1.0));
  CHECK(s(2) == doctest::Approx(0.1));
}

TEST_CASE("kron ordering puts the left factor first") {
  const StateVector e0 = basis_state(2, 0), e1 = basis_state(2, 1);
  const StateVector v = basis_state(3, 2);
  CHECK(std::abs(kron(e1, v)(5) - 1.0) < 1e-15);
  CHECK(std::abs(kron(e0, v)(2) - 1.0) < 1e-15);
  const ComplexMatrix k = kron(pauli::plus(), ComplexMatrix::Identity(3, 3));
  CHECK(k.rows() == 6);
  CHECK(std::abs(k(0, 3) - 1.0) < 1e-15);
  CHECK(std::abs(k(3, 0)) < 1e-15);
  CHECK((pauli::plus() * basis_state(2, 1) - e0).norm() < 1e-15);
}

TEST_CASE("hermitian helpers") {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 1) = Complex(1.0, 1.0);
  m(1, 0) = Complex(1.0, -1.0 + 1e-13);
  CHECK(is_hermitian(m));
  CHECK(hermitian_defect(m) < 1e-12);
  CHECK(hermitian_defect(hermitian_part(m)) == 0.0);
  m(1, 0) = 0.0;
  CHECK_FALSE(is_hermitian(m));
}
