#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <vector>

#include "qlsp/hamiltonians.hpp"
#include "qlsp/propagator.hpp"
#include "qlsp/schedules.hpp"

namespace qlsp {

inline constexpr double kDefaultTrotterStep = 0.2;

struct EvolutionPlan {
  double runtime = 1.0;  // T
  Index steps = 5;       // M
  Schedule schedule = Schedule::vanilla();
  bool record_trace = false;

  double step_h() const { return 1.0 / static_cast<double>(steps); }
  double physical_step() const { return runtime / static_cast<double>(steps); }

  /// M = ceil(T / max_physical_step).
  static EvolutionPlan for_runtime(double runtime, const Schedule& schedule,
                                   double max_physical_step = kDefaultTrotterStep, bool record_trace = false);
};

/// Throws InvalidPlan unless T > 0, M >= 1 and T/M <= 0.2 + 1e-12.
void validate(const EvolutionPlan& plan);

struct TracePoint {
  double s;
  double fidelity;
  double dark_overlap;
};

struct EvolutionResult {
  StateVector final_state;
  double fidelity = 0.0;
  double density_error = 1.0;
  double dark_overlap_max = 0.0;
  std::vector<TracePoint> trace;
};

/// First-order splitting of the scheduled dynamics,
///   psi <- exp(-i T h (1 - f_m) H0) exp(-i T h f_m H1) psi,  f_m = f(m h),
/// for m = 1..M starting from emb.initial_state.
EvolutionResult evolve(const HamiltonianEmbedding& emb, const EvolutionPlan& plan);
EvolutionResult evolve(const HamiltonianEmbedding& emb, const SplitPropagator& prop, const EvolutionPlan& plan);

/// |<psi|target>|^2.
double fidelity(const StateVector& psi, const StateVector& target);

/// sqrt(1 - fidelity): the 2-norm distance between the two pure-state
/// density matrices.
double density_error(const StateVector& psi, const StateVector& target);

void write_trace_csv(std::ostream& out, const std::vector<TracePoint>& trace);
void write_trace_csv(const std::filesystem::path& path, const std::vector<TracePoint>& trace);

}  // namespace qlsp
