#include "qlsp/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qlsp/error.hpp"

namespace qlsp {

namespace {

constexpr double kRankTol = 1e-12;
constexpr double kPivotTol = 1e-13;

void require_square(const ComplexMatrix& m, const char* what) {
  if (m.rows() != m.cols()) {
    throw Error(ErrorCode::kNotSquare, std::string(what) + ": " + std::to_string(m.rows()) + "x" +
                                           std::to_string(m.cols()));
  }
}

}  // namespace

double hermitian_defect(const ComplexMatrix& h) {
  if (h.rows() != h.cols()) return INFINITY;
  double worst = 0.0;
  for (Index j = 0; j < h.cols(); ++j) {
    for (Index i = 0; i <= j; ++i) {
      worst = std::max(worst, std::abs(h(i, j) - std::conj(h(j, i))));
    }
  }
  return worst;
}

bool is_hermitian(const ComplexMatrix& h, double tol) { return hermitian_defect(h) <= tol; }

ComplexMatrix hermitian_part(const ComplexMatrix& h) {
  ComplexMatrix out = 0.5 * (h + h.adjoint());
  return out;
}

EigenDecomposition hermitian_eigendecompose(const ComplexMatrix& h) {
  require_square(h, "hermitian_eigendecompose");
  const double defect = hermitian_defect(h);
  if (defect > kHermitianTol) {
    throw Error(ErrorCode::kNotHermitian, "defect " + std::to_string(defect));
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::kNotHermitian, "eigensolver did not converge");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

ComplexMatrix qr_orthonormalize(const ComplexMatrix& m, RankPolicy policy) {
  require_square(m, "qr_orthonormalize");
  const Index n = m.rows();
  Eigen::HouseholderQR<ComplexMatrix> qr(m);
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(n, n);
  const ComplexMatrix& packed = qr.matrixQR();
  for (Index k = 0; k < n; ++k) {
    const Complex rkk = packed(k, k);
    Complex phase{1.0, 0.0};
    if (std::abs(rkk) >= kRankTol) {
      phase = rkk / std::abs(rkk);
    } else if (policy == RankPolicy::kStrict) {
      throw Error(ErrorCode::kRankDeficient,
                  "|R(" + std::to_string(k) + "," + std::to_string(k) + ")| = " + std::to_string(std::abs(rkk)));
    } else {
      Index lead = 0;
      const double scale = q.col(k).cwiseAbs().maxCoeff();
      while (lead < n && std::abs(q(lead, k)) < 1e-8 * scale) ++lead;
      phase = std::conj(q(lead, k)) / std::abs(q(lead, k));
    }
    // Q R = (Q D)(D^* R) with D = diag(phase) makes R(k,k) = |R(k,k)|.
    q.col(k) *= phase;
  }
  return q;
}

StateVector apply_exp(const EigenDecomposition& eig, double tau, const StateVector& psi) {
  if (eig.dim() != psi.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "apply_exp: " + std::to_string(eig.dim()) + " vs " + std::to_string(psi.size()));
  }
  StateVector coeffs = eig.eigenvectors.adjoint() * psi;
  for (Index k = 0; k < coeffs.size(); ++k) {
    coeffs(k) *= std::exp(-kI * (tau * eig.eigenvalues(k)));
  }
  StateVector out = eig.eigenvectors * coeffs;
  return out;
}

StateVector solve_linear(const ComplexMatrix& a, const StateVector& b) {
  require_square(a, "solve_linear");
  const Index n = a.rows();
  if (b.size() != n) {
    throw Error(ErrorCode::kDimensionMismatch,
                "solve_linear: " + std::to_string(n) + " vs " + std::to_string(b.size()));
  }
  ComplexMatrix lu = a;
  StateVector x = b;
  for (Index k = 0; k < n; ++k) {
    Index pivot = k;
    for (Index i = k + 1; i < n; ++i) {
      if (std::abs(lu(i, k)) > std::abs(lu(pivot, k))) pivot = i;
    }
    if (std::abs(lu(pivot, k)) < kPivotTol) {
      throw Error(ErrorCode::kSingular, "pivot " + std::to_string(k) + " below 1e-13");
    }
    if (pivot != k) {
      lu.row(k).swap(lu.row(pivot));
      std::swap(x(k), x(pivot));
    }
    for (Index i = k + 1; i < n; ++i) {
      const Complex factor = lu(i, k) / lu(k, k);
      if (factor == Complex{}) continue;
      lu.row(i).tail(n - k) -= factor * lu.row(k).tail(n - k);
      x(i) -= factor * x(k);
    }
  }
  for (Index k = n - 1; k >= 0; --k) {
    Complex acc = x(k);
    for (Index j = k + 1; j < n; ++j) acc -= lu(k, j) * x(j);
    x(k) = acc / lu(k, k);
  }
  const double norm = x.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw Error(ErrorCode::kSingular, "solution norm " + std::to_string(norm));
  }
  return x / norm;
}

RealVector singular_values(const ComplexMatrix& m) {
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  return svd.singularValues();
}

double spectral_norm(const ComplexMatrix& m) {
  if (m.size() == 0) return 0.0;
  return singular_values(m)(0);
}

double condition_number(const ComplexMatrix& m) {
  require_square(m, "condition_number");
  const RealVector sv = singular_values(m);
  const double smallest = sv(sv.size() - 1);
  if (smallest <= 0.0) return INFINITY;
  return sv(0) / smallest;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

StateVector kron(const StateVector& a, const StateVector& b) {
  StateVector out(a.size() * b.size());
  for (Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

namespace pauli {

ComplexMatrix x() {
  ComplexMatrix m(2, 2);
  m << 0.0, 1.0, 1.0, 0.0;
  return m;
}

ComplexMatrix y() {
  ComplexMatrix m(2, 2);
  m << 0.0, -kI, kI, 0.0;
  return m;
}

ComplexMatrix z() {
  ComplexMatrix m(2, 2);
  m << 1.0, 0.0, 0.0, -1.0;
  return m;
}

ComplexMatrix plus() {
  ComplexMatrix m(2, 2);
  m << 0.0, 1.0, 0.0, 0.0;
  return m;
}

ComplexMatrix minus() {
  ComplexMatrix m(2, 2);
  m << 0.0, 0.0, 1.0, 0.0;
  return m;
}

}  // namespace pauli

StateVector basis_state(Index dim, Index k) {
  StateVector v = StateVector::Zero(dim);
  v(k) = 1.0;
  return v;
}

}  // namespace qlsp
