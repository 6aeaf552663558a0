#pragma once

#include "qlsp/linalg.hpp"
#include "qlsp/problems.hpp"

namespace qlsp {

/// Linear gap lower bound prefactor * (1 - f + f/kappa).
struct GapModel {
  double kappa = 1.0;
  double prefactor = 1.0;
};

double gap_lower_bound(const GapModel& model, double f);

// Tensor ordering: ancilla qubits are the most significant factors, so a
// state |a, v> is stored as kron(e_a, v) and the system index varies fastest.
struct HamiltonianEmbedding {
  ComplexMatrix h0;
  ComplexMatrix h1;
  StateVector initial_state;
  StateVector target_state;
  StateVector dark_state;
  double gap_prefactor = 1.0;
  double kappa = 1.0;
  int ancilla_qubits = 1;

  Index dim() const { return h0.rows(); }
  GapModel gap_model() const { return {kappa, gap_prefactor}; }
};

/// H0 = sigma_x (x) Q_b, H1 = sigma_+ (x) A Q_b + sigma_- (x) Q_b A on 2N.
HamiltonianEmbedding build_pd_embedding(const QlspInstance& inst);

/// Four-block family on 4N for Hermitian, possibly indefinite, A.
HamiltonianEmbedding build_indefinite_embedding(const ComplexMatrix& a_herm, const StateVector& b, double kappa);

/// Dilates A into [[0, A], [A^dagger, 0]] with right-hand side |+, b> and
/// embeds that on 8N.
HamiltonianEmbedding build_general_embedding(const QlspInstance& inst);

/// Picks the embedding matching inst.matrix_class.
HamiltonianEmbedding build_embedding(const QlspInstance& inst);

/// (1 - f) H0 + f H1.
ComplexMatrix interpolate(const HamiltonianEmbedding& emb, double f);

/// [[0, A], [A^dagger, 0]].
ComplexMatrix hermitian_dilation(const ComplexMatrix& a);

}  // namespace qlsp
