#include "qlsp/hamiltonians.hpp"

#include <cmath>
#include <string>

#include "qlsp/error.hpp"

namespace qlsp {

namespace {

void require_unit_interval(double f, const char* what) {
  if (!(f >= 0.0 && f <= 1.0)) {
    throw Error(ErrorCode::kOutOfRange, std::string(what) + ": f = " + std::to_string(f) + " outside [0,1]");
  }
}

StateVector qubit(double c0, double c1) {
  StateVector v(2);
  v << c0, c1;
  return v;
}

ComplexMatrix projector_complement(const StateVector& v) {
  const Index n = v.size();
  ComplexMatrix q = ComplexMatrix::Identity(n, n) - v * v.adjoint();
  return hermitian_part(q);
}

// sigma_+ (x) (M Q) + sigma_- (x) (Q M^dagger); Hermitian for any M, Q = Q^dagger.
ComplexMatrix off_diagonal_pair(const ComplexMatrix& m, const ComplexMatrix& q) {
  const ComplexMatrix upper = m * q;
  return hermitian_part(kron(pauli::plus(), upper) + kron(pauli::minus(), upper.adjoint()));
}

}  // namespace

double gap_lower_bound(const GapModel& model, double f) {
  require_unit_interval(f, "gap_lower_bound");
  return model.prefactor * (1.0 - f + f / model.kappa);
}

HamiltonianEmbedding build_pd_embedding(const QlspInstance& inst) {
  if (inst.matrix_class != MatrixClass::kHermitianPd) {
    throw Error(ErrorCode::kWrongClass, "build_pd_embedding needs hermitian_pd, got " +
                                            std::string(to_string(inst.matrix_class)));
  }
  const ComplexMatrix qb = projector_complement(inst.b);
  HamiltonianEmbedding emb;
  emb.h0 = hermitian_part(kron(pauli::x(), qb));
  // A Hermitian, so (A Q_b)^dagger = Q_b A.
  emb.h1 = off_diagonal_pair(inst.a, qb);
  const StateVector x = solve_linear(inst.a, inst.b);
  emb.initial_state = kron(qubit(1, 0), inst.b);
  emb.dark_state = kron(qubit(0, 1), inst.b);
  emb.target_state = kron(qubit(1, 0), x);
  emb.gap_prefactor = 1.0;
  emb.kappa = inst.kappa;
  emb.ancilla_qubits = 1;
  return emb;
}

HamiltonianEmbedding build_indefinite_embedding(const ComplexMatrix& a_herm, const StateVector& b, double kappa) {
  if (a_herm.rows() != a_herm.cols()) throw Error(ErrorCode::kNotSquare, "build_indefinite_embedding");
  if (b.size() != a_herm.rows()) throw Error(ErrorCode::kDimensionMismatch, "build_indefinite_embedding");
  if (!is_hermitian(a_herm, 1e-10)) throw Error(ErrorCode::kNotHermitian, "build_indefinite_embedding");
  const Index n = a_herm.rows();
  const double r = 1.0 / std::sqrt(2.0);
  const StateVector plus = qubit(r, r);
  const StateVector minus = qubit(r, -r);

  const StateVector plus_b = kron(plus, b);
  const ComplexMatrix q = projector_complement(plus_b);
  const ComplexMatrix z_id = kron(pauli::z(), ComplexMatrix::Identity(n, n));
  const ComplexMatrix x_a = kron(pauli::x(), hermitian_part(a_herm));

  HamiltonianEmbedding emb;
  emb.h0 = off_diagonal_pair(z_id, q);
  emb.h1 = off_diagonal_pair(x_a, q);
  const StateVector x = solve_linear(a_herm, b);
  emb.initial_state = kron(qubit(1, 0), kron(minus, b));
  emb.dark_state = kron(qubit(0, 1), plus_b);
  emb.target_state = kron(qubit(1, 0), kron(plus, x));
  emb.gap_prefactor = r;
  emb.kappa = kappa;
  emb.ancilla_qubits = 2;
  return emb;
}

ComplexMatrix hermitian_dilation(const ComplexMatrix& a) {
  return kron(pauli::plus(), a) + kron(pauli::minus(), ComplexMatrix(a.adjoint()));
}

HamiltonianEmbedding build_general_embedding(const QlspInstance& inst) {
  if (inst.matrix_class != MatrixClass::kGeneral) {
    throw Error(ErrorCode::kWrongClass, "build_general_embedding needs general, got " +
                                            std::string(to_string(inst.matrix_class)));
  }
  const double r = 1.0 / std::sqrt(2.0);
  const StateVector dilated_rhs = kron(qubit(r, r), inst.b);
  HamiltonianEmbedding emb = build_indefinite_embedding(hermitian_dilation(inst.a), dilated_rhs, inst.kappa);
  emb.ancilla_qubits = 3;
  return emb;
}

HamiltonianEmbedding build_embedding(const QlspInstance& inst) {
  switch (inst.matrix_class) {
    case MatrixClass::kHermitianPd: return build_pd_embedding(inst);
    case MatrixClass::kHermitianIndefinite: return build_indefinite_embedding(inst.a, inst.b, inst.kappa);
    case MatrixClass::kGeneral: return build_general_embedding(inst);
  }
  throw Error(ErrorCode::kWrongClass, "unknown matrix class");
}

ComplexMatrix interpolate(const HamiltonianEmbedding& emb, double f) {
  require_unit_interval(f, "interpolate");
  ComplexMatrix h = (1.0 - f) * emb.h0 + f * emb.h1;
  return h;
}

}  // namespace qlsp
