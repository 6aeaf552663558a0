#pragma once

#include "qlsp/hamiltonians.hpp"
#include "qlsp/linalg.hpp"

namespace qlsp {

/// Exact exponentials of the two fixed generators H0 and H1.
///
/// Both are diagonalized once. A state is carried in the eigenbasis of one
/// generator, where its exponential is a diagonal phase, and moved to the
/// other eigenbasis with the unitary transfer matrix V0^dagger V1. Each
/// alternating factor therefore costs one dense matvec.
class SplitPropagator {
 public:
  explicit SplitPropagator(const HamiltonianEmbedding& emb);

  Index dim() const { return eig0_.dim(); }
  const EigenDecomposition& h0_eig() const { return eig0_; }
  const EigenDecomposition& h1_eig() const { return eig1_; }

  // Coordinate changes between the computational basis and each eigenbasis.
  StateVector to_h0(const StateVector& psi) const { return eig0_.eigenvectors.adjoint() * psi; }
  StateVector to_h1(const StateVector& psi) const { return eig1_.eigenvectors.adjoint() * psi; }
  StateVector from_h0(const StateVector& c) const { return eig0_.eigenvectors * c; }
  StateVector from_h1(const StateVector& c) const { return eig1_.eigenvectors * c; }

  /// out = coordinates in the H0 basis of the state with H1 coordinates c1.
  void h1_to_h0(const StateVector& c1, StateVector& out) const { out.noalias() = h1_to_h0_ * c1; }
  void h0_to_h1(const StateVector& c0, StateVector& out) const { out.noalias() = h0_to_h1_ * c0; }
  const ComplexMatrix& h1_to_h0_matrix() const { return h1_to_h0_; }
  const ComplexMatrix& h0_to_h1_matrix() const { return h0_to_h1_; }

  /// c *= exp(-i tau lambda) in the matching eigenbasis.
  void phase_h0(StateVector& c0, double tau) const { apply_phase(eig0_.eigenvalues, c0, tau); }
  void phase_h1(StateVector& c1, double tau) const { apply_phase(eig1_.eigenvalues, c1, tau); }

 private:
  static void apply_phase(const RealVector& lambda, StateVector& c, double tau);

  EigenDecomposition eig0_;
  EigenDecomposition eig1_;
  ComplexMatrix h1_to_h0_;
  ComplexMatrix h0_to_h1_;
};

}  // namespace qlsp
