#pragma once

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "qlsp/hamiltonians.hpp"
#include "qlsp/propagator.hpp"

namespace qlsp {

/// Angles of exp(-i g_P H1) exp(-i b_P H0) ... exp(-i g_1 H1) exp(-i b_1 H0).
struct QaoaParams {
  std::vector<double> betas;
  std::vector<double> gammas;

  Index depth() const { return static_cast<Index>(betas.size()); }

  /// sum_i |beta_i| + |gamma_i|.
  double runtime_metric() const;

  /// (beta_1..beta_P, gamma_1..gamma_P).
  std::vector<double> flatten() const;
  static QaoaParams unflatten(const std::vector<double>& theta);
};

/// Throws InvalidConfig for empty or mismatched angle lists or non-finite angles.
void validate(const QaoaParams& params);

/// Angles of the first-order splitting of the bump schedule at runtime
/// `runtime`: beta_i = h T (1 - f(i h)), gamma_i = h T f(i h), h = 1/P.
QaoaParams adiabatic_warm_start(Index depth, double runtime);

/// Ansatz evaluation with both generator eigendecompositions cached. Angles are
/// applied in order beta_1, gamma_1, beta_2, ... to emb.initial_state.
class QaoaCircuit {
 public:
  explicit QaoaCircuit(const HamiltonianEmbedding& emb);

  const HamiltonianEmbedding& embedding() const { return emb_; }
  const SplitPropagator& propagator() const { return prop_; }

  StateVector apply(const QaoaParams& params) const;

  /// ||H1 psi_theta||; zero exactly on the null space of H1.
  double objective(const QaoaParams& params) const;

  /// Exact gradient of objective() by one forward and one backward sweep
  /// through the circuit.
  std::vector<double> adjoint_gradient(const QaoaParams& params) const;

  /// Central differences of objective() with step fd_step per coordinate.
  std::vector<double> fd_gradient(const QaoaParams& params, double fd_step) const;

 private:
  // Final state in H1 eigen-coordinates.
  StateVector forward_h1(const QaoaParams& params) const;

  HamiltonianEmbedding emb_;
  SplitPropagator prop_;
  StateVector initial_h0_;
};

StateVector apply_ansatz(const HamiltonianEmbedding& emb, const QaoaParams& params);
double objective(const HamiltonianEmbedding& emb, const QaoaParams& params);
std::vector<double> gradient(const HamiltonianEmbedding& emb, const QaoaParams& params, double fd_step = 1e-5);

enum class GradientMethod { kAdjoint, kCentralDifference };

enum class DescentDirection {
  kSteepest,  // -g
  kLbfgs,     // limited-memory quasi-Newton, falls back to -g when not a descent direction
};

struct OptimizerConfig {
  double armijo_c = 1e-4;
  double shrink = 0.5;
  double initial_step = 0.1;
  double min_step = 1e-14;
  int max_iterations = 5000;
  double fd_step = 1e-5;
  GradientMethod gradient = GradientMethod::kAdjoint;
  DescentDirection direction = DescentDirection::kLbfgs;
  int lbfgs_memory = 10;
  // Warm start runtime per layer: T0 = warm_start_per_layer * P.
  double warm_start_per_layer = 0.4;
  // Optional per-iteration CSV sink.
  std::ostream* log = nullptr;
};

struct QaoaIterate {
  int iteration = 0;
  double objective = 0.0;
  double fidelity = 0.0;
  double runtime_metric = 0.0;
  double step_size = 0.0;
};

struct QaoaReport {
  QaoaParams params;  // final iterate
  double objective = 0.0;
  double fidelity = 0.0;
  double runtime_metric = 0.0;
  int iterations = 0;
  bool converged = false;
  // Iterate with the highest fidelity seen along the run.
  QaoaParams best_params;
  double best_fidelity = 0.0;
  double best_runtime_metric = 0.0;
  int best_iteration = 0;
};

/// Gradient descent with Armijo backtracking from the adiabatic warm start.
/// Stops as soon as objective < eps / kappa. Fidelity is tracked against
/// emb.target_state for reporting only.
QaoaReport optimize(const HamiltonianEmbedding& emb, Index depth, double eps, const OptimizerConfig& config = {});
QaoaReport optimize(const QaoaCircuit& circuit, const QaoaParams& start, double eps, const OptimizerConfig& config);

/// Header iter,objective,fidelity,runtime_metric,step_size.
void write_iterate_csv_header(std::ostream& out);
void write_iterate_csv_row(std::ostream& out, const QaoaIterate& it);

}  // namespace qlsp
