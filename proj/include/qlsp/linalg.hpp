#pragma once

#include <complex>

#include <Eigen/Dense>

namespace qlsp {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using StateVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

inline constexpr Complex kI{0.0, 1.0};
inline constexpr double kHermitianTol = 1e-12;

/// Spectral factorization H = V diag(eigenvalues) V^dagger with eigenvalues
/// ascending and V unitary.
struct EigenDecomposition {
  RealVector eigenvalues;
  ComplexMatrix eigenvectors;

  Index dim() const { return eigenvalues.size(); }
};

/// Largest entrywise deviation |H[i][j] - conj(H[j][i])|.
double hermitian_defect(const ComplexMatrix& h);
bool is_hermitian(const ComplexMatrix& h, double tol = kHermitianTol);

/// (H + H^dagger) / 2, used to strip rounding-level asymmetry from products.
ComplexMatrix hermitian_part(const ComplexMatrix& h);

EigenDecomposition hermitian_eigendecompose(const ComplexMatrix& h);

enum class RankPolicy {
  kStrict,    // throw RankDeficient when a diagonal of R drops below 1e-12
  kComplete,  // keep the Householder completion of the orthonormal basis
};

/// Q factor of M = QR with diag(R) real and nonnegative. Columns whose R
/// diagonal vanishes (kComplete only) are oriented so their first
/// non-negligible entry is real positive.
ComplexMatrix qr_orthonormalize(const ComplexMatrix& m, RankPolicy policy = RankPolicy::kStrict);

/// V diag(exp(-i tau lambda)) V^dagger psi.
StateVector apply_exp(const EigenDecomposition& eig, double tau, const StateVector& psi);

/// Normalized A^{-1} b via partially pivoted elimination.
StateVector solve_linear(const ComplexMatrix& a, const StateVector& b);

RealVector singular_values(const ComplexMatrix& m);
double spectral_norm(const ComplexMatrix& m);
double condition_number(const ComplexMatrix& m);

/// Kronecker product, left factor most significant.
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
StateVector kron(const StateVector& a, const StateVector& b);

namespace pauli {
ComplexMatrix x();
ComplexMatrix y();
ComplexMatrix z();
ComplexMatrix plus();   // sigma_+ = |0><1|
ComplexMatrix minus();  // sigma_- = |1><0|
}  // namespace pauli

StateVector basis_state(Index dim, Index k);

}  // namespace qlsp
