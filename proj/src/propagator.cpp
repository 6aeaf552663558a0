#include "qlsp/propagator.hpp"

#include <cmath>

namespace qlsp {

SplitPropagator::SplitPropagator(const HamiltonianEmbedding& emb)
    : eig0_(hermitian_eigendecompose(emb.h0)), eig1_(hermitian_eigendecompose(emb.h1)) {
  h1_to_h0_ = eig0_.eigenvectors.adjoint() * eig1_.eigenvectors;
  h0_to_h1_ = h1_to_h0_.adjoint();
}

void SplitPropagator::apply_phase(const RealVector& lambda, StateVector& c, double tau) {
  if (tau == 0.0) return;
  for (Index k = 0; k < c.size(); ++k) {
    const double angle = -tau * lambda(k);
    c(k) *= Complex(std::cos(angle), std::sin(angle));
  }
}

}  // namespace qlsp
