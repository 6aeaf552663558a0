#pragma once

#include <string>
#include <vector>

#include "qlsp/linalg.hpp"

namespace qlsp {

enum class ScheduleKind { kVanilla, kPower, kExponential };

/// Scheduling function f: [0,1] -> [0,1], strictly increasing, f(0) = 0,
/// f(1) = 1.
class Schedule {
 public:
  static Schedule vanilla();
  /// Gap-adapted schedule f' = c_p (1 - f + f/kappa)^p for p in [1, 2].
  /// kappa == 1 degenerates to f(s) = s.
  static Schedule power(double p, double kappa);
  /// Bump-integral schedule with every derivative vanishing at both ends.
  static Schedule exponential(double quadrature_tol = 1e-12);

  ScheduleKind kind() const { return kind_; }
  double p() const { return p_; }
  double kappa() const { return kappa_; }
  double c_p() const { return c_p_; }
  double c_e() const { return c_e_; }
  double quadrature_tol() const { return quadrature_tol_; }

  double operator()(double s) const;

  /// f(m / steps) for m = 0..steps. Exponential schedules accumulate the
  /// integral panel by panel instead of restarting from 0 for every point.
  std::vector<double> sample(Index steps) const;

  /// "vanilla", "aqc(1.5)", "aqc(exp)".
  std::string label() const;

 private:
  Schedule() = default;

  ScheduleKind kind_ = ScheduleKind::kVanilla;
  double p_ = 0.0;
  double kappa_ = 1.0;
  double c_p_ = 1.0;
  double c_e_ = 1.0;
  double quadrature_tol_ = 1e-12;
};

double eval_vanilla(double s);
double eval_power_p(const Schedule& sched, double s);
double eval_power_one(double kappa, double s);
double eval_exponential(const Schedule& sched, double s);

/// exp(-1 / (s (1 - s))), set to 0 outside the open unit interval.
double bump(double s);

/// Integral of bump over [0, 1], computed once to 1e-14.
double exponential_normalization();

/// Closed-form integral of (1 - u + u/kappa)^(-p) over [0, 1].
double power_normalization(double p, double kappa);

struct SchedulePoint {
  double s;
  double f;
};

/// Classical RK4 integration of f' = c_p (1 - f + f/kappa)^p on a uniform grid
/// of `grid` intervals, with c_p obtained by quadrature.
std::vector<SchedulePoint> ode_oracle(double kappa, double p, Index grid);

}  // namespace qlsp
