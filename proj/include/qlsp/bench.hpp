#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qlsp/evolution.hpp"
#include "qlsp/hamiltonians.hpp"
#include "qlsp/problems.hpp"
#include "qlsp/propagator.hpp"
#include "qlsp/qaoa.hpp"
#include "qlsp/schedules.hpp"

namespace qlsp {

// Candidate runtimes are k / kLatticePerUnit, i.e. multiples of the 0.2
// Trotter step, so every candidate has an integral step count.
inline constexpr double kLatticePerUnit = 5.0;

struct RuntimeSearch {
  double t_init = 1.0;
  double t_max = 1e5;
  double bisection_tol = 0.05;
};

struct RuntimePoint {
  double runtime = 0.0;
  Index steps = 0;
  double fidelity = 0.0;
  double density_error = 1.0;
};

/// Smallest lattice runtime reaching target_fidelity: doubles from t_init until
/// the target is met, then bisects the last bracket down to relative width
/// bisection_tol. Fidelity need not be monotone in T, so the answer is the
/// upper end of the first bracket found. Throws TargetUnreachable past t_max.
RuntimePoint min_runtime(const HamiltonianEmbedding& emb, const SplitPropagator& prop, const Schedule& schedule,
                         double target_fidelity, const RuntimeSearch& search = {});
RuntimePoint min_runtime(const HamiltonianEmbedding& emb, const Schedule& schedule, double target_fidelity,
                         const RuntimeSearch& search = {});

enum class MethodKind { kVanilla, kPower, kExponential, kQaoa };

struct Method {
  MethodKind kind = MethodKind::kExponential;
  double p = 1.5;      // kPower only
  Index depth = 20;    // kQaoa only; 0 means "use the kappa depth rule"

  /// "vanilla", "aqc(1.5)", "aqc(exp)", "qaoa".
  std::string label() const;
  Schedule schedule(double kappa) const;
  bool is_qaoa() const { return kind == MethodKind::kQaoa; }

  /// Accepts vanilla, aqc-p, aqc-exp, qaoa (with p / depth supplied apart).
  static Method parse(const std::string& name, double p = 1.5, Index depth = 20);
};

/// QAOA depth for kappa sweeps: linear from 8 at kappa = 5 to 60 at kappa = 80.
Index qaoa_depth_for_kappa(double kappa);

/// Target fidelity 1 - eps^2 for a density-error target eps.
double fidelity_for_eps(double eps);
double eps_for_fidelity(double fidelity);

struct SweepConfig {
  Method method;
  Family family = Family::kPdLaplacian;
  Index n_dim = 64;
  std::vector<double> kappa_grid{5, 10, 20, 40, 80};
  std::vector<double> target_fidelities{0.99};
  std::vector<double> target_eps{0.3, 0.1, 0.03, 0.01, 0.003};
  RuntimeSearch search;
  OptimizerConfig optimizer;
  int threads = 0;  // 0: QLSP_THREADS or hardware concurrency
};

/// Throws InvalidConfig when the kappa grid is not strictly increasing above 1
/// or a target lies outside (0, 1).
void validate(const SweepConfig& cfg);

struct SweepRow {
  std::string method;
  std::string family;
  double kappa = 0.0;
  double target = 0.0;  // fidelity (kappa sweeps) or eps (eps sweeps)
  bool reached = false;
  double runtime = 0.0;  // AQC runtime T, or the QAOA runtime metric
  Index steps = 0;       // Trotter steps M, or the QAOA depth
  double fidelity = 0.0;
  double density_error = 1.0;
  Index qaoa_depth = 0;
  double qaoa_runtime_metric = 0.0;
};

struct FitPoint {
  double x;
  double runtime;
};

struct ScalingFit {
  double exponent = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  std::vector<FitPoint> points;
};

/// Ordinary least squares of log(runtime) against log(x).
ScalingFit fit_loglog(const std::vector<FitPoint>& points);

inline constexpr std::size_t kMinSweepFitPoints = 4;

enum class FitAxis { kKappa, kInvEps, kLogInvEps };
std::string_view to_string(FitAxis axis);
FitAxis parse_fit_axis(std::string_view text);

struct LabeledFit {
  std::string label;  // e.g. "aqc(1.5) pd target=0.99 vs kappa"
  FitAxis axis = FitAxis::kKappa;
  std::optional<ScalingFit> fit;  // empty when fewer than kMinSweepFitPoints reached
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::vector<LabeledFit> fits;
};

SweepResult sweep_kappa(const SweepConfig& cfg);
SweepResult sweep_epsilon(const SweepConfig& cfg, double kappa_fixed = 10.0);

/// Groups rows by (method, family, and target for kappa axes) and fits each
/// group with at least kMinSweepFitPoints reached points.
std::vector<LabeledFit> fit_rows(const std::vector<SweepRow>& rows, FitAxis axis);

/// method,family,kappa,target,runtime_T,steps_M,fidelity,density_error,qaoa_depth,qaoa_runtime_metric
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);
std::vector<SweepRow> read_sweep_csv(std::istream& in);
void write_sweep_csv(const std::filesystem::path& path, const std::vector<SweepRow>& rows);
std::vector<SweepRow> read_sweep_csv(const std::filesystem::path& path);

/// JSON sidecar describing the sweep for replay.
std::string sweep_config_json(const SweepConfig& cfg, const std::string& kind, double kappa_fixed);

/// Worker count from QLSP_THREADS (if set and positive), else hardware concurrency.
int default_thread_count();

}  // namespace qlsp
