#include "qlsp/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <string>

#include "qlsp/error.hpp"

namespace qlsp {

namespace {

constexpr double kUnitNormTol = 1e-8;
constexpr double kRenormalizeTol = 1e-10;

void require_comparable(const StateVector& psi, const StateVector& target) {
  if (psi.size() != target.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                std::to_string(psi.size()) + " vs " + std::to_string(target.size()));
  }
  if (std::abs(psi.norm() - 1.0) > kUnitNormTol || std::abs(target.norm() - 1.0) > kUnitNormTol) {
    throw Error(ErrorCode::kOutOfRange, "fidelity needs unit-norm states");
  }
}

}  // namespace

EvolutionPlan EvolutionPlan::for_runtime(double runtime, const Schedule& schedule, double max_physical_step,
                                         bool record_trace) {
  if (!(runtime > 0.0) || !std::isfinite(runtime)) throw Error(ErrorCode::kInvalidPlan, "runtime must be > 0");
  if (!(max_physical_step > 0.0)) throw Error(ErrorCode::kInvalidPlan, "step must be > 0");
  const double ratio = runtime / max_physical_step;
  // Nearest integer when T is a lattice multiple, so T = 100, step 0.2 gives 500.
  Index steps = static_cast<Index>(std::ceil(ratio - 1e-9 * std::max(1.0, ratio)));
  steps = std::max<Index>(steps, 1);
  EvolutionPlan plan{runtime, steps, schedule, record_trace};
  validate(plan);
  return plan;
}

void validate(const EvolutionPlan& plan) {
  if (!(plan.runtime > 0.0) || !std::isfinite(plan.runtime)) {
    throw Error(ErrorCode::kInvalidPlan, "runtime must be finite and > 0");
  }
  if (plan.steps < 1) throw Error(ErrorCode::kInvalidPlan, "step count must be >= 1");
  if (plan.physical_step() > kDefaultTrotterStep + 1e-12) {
    throw Error(ErrorCode::kInvalidPlan, "physical step " + std::to_string(plan.physical_step()) + " exceeds 0.2");
  }
}

EvolutionResult evolve(const HamiltonianEmbedding& emb, const EvolutionPlan& plan) {
  validate(plan);
  const SplitPropagator prop(emb);
  return evolve(emb, prop, plan);
}

EvolutionResult evolve(const HamiltonianEmbedding& emb, const SplitPropagator& prop, const EvolutionPlan& plan) {
  validate(plan);
  if (prop.dim() != emb.dim() || emb.initial_state.size() != emb.dim() || emb.target_state.size() != emb.dim() ||
      emb.dark_state.size() != emb.dim()) {
    throw Error(ErrorCode::kDimensionMismatch, "embedding and propagator dimensions differ");
  }
  const Index steps = plan.steps;
  const std::vector<double> f = plan.schedule.sample(steps);
  const double tau = plan.runtime / static_cast<double>(steps);

  // The state lives in H1 coordinates between steps.
  StateVector c1 = prop.to_h1(emb.initial_state);
  StateVector c0(prop.dim());
  const StateVector dark1 = prop.to_h1(emb.dark_state);
  const StateVector target1 = prop.to_h1(emb.target_state);

  EvolutionResult result;
  result.dark_overlap_max = std::abs(dark1.dot(c1));
  const Index stride = std::max<Index>(1, steps / 1000);
  if (plan.record_trace) {
    result.trace.push_back({0.0, std::norm(target1.dot(c1)), result.dark_overlap_max});
  }

  for (Index m = 1; m <= steps; ++m) {
    const double fm = f[static_cast<std::size_t>(m)];
    prop.phase_h1(c1, tau * fm);
    prop.h1_to_h0(c1, c0);
    prop.phase_h0(c0, tau * (1.0 - fm));
    prop.h0_to_h1(c0, c1);

    const double norm = c1.norm();
    if (std::abs(norm - 1.0) > kRenormalizeTol) c1 /= norm;
    const double dark = std::abs(dark1.dot(c1));
    result.dark_overlap_max = std::max(result.dark_overlap_max, dark);
    if (plan.record_trace && (m % stride == 0 || m == steps)) {
      result.trace.push_back({static_cast<double>(m) / static_cast<double>(steps), std::norm(target1.dot(c1)), dark});
    }
  }

  result.final_state = prop.from_h1(c1);
  result.final_state /= result.final_state.norm();
  result.fidelity = fidelity(result.final_state, emb.target_state);
  result.density_error = density_error(result.final_state, emb.target_state);
  return result;
}

double fidelity(const StateVector& psi, const StateVector& target) {
  require_comparable(psi, target);
  return std::norm(target.dot(psi));
}

double density_error(const StateVector& psi, const StateVector& target) {
  return std::sqrt(std::max(0.0, 1.0 - fidelity(psi, target)));
}

void write_trace_csv(std::ostream& out, const std::vector<TracePoint>& trace) {
  out << "s,fidelity,dark_overlap\n";
  char buf[96];
  for (const auto& p : trace) {
    std::snprintf(buf, sizeof(buf), "%.10g,%.17g,%.6e\n", p.s, p.fidelity, p.dark_overlap);
    out << buf;
  }
}

void write_trace_csv(const std::filesystem::path& path, const std::vector<TracePoint>& trace) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kParseError, "cannot open " + path.string() + " for writing");
  write_trace_csv(out, trace);
}

}  // namespace qlsp
