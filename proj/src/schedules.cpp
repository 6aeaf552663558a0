#include "qlsp/schedules.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "qlsp/error.hpp"
#include "qlsp/quadrature.hpp"

namespace qlsp {

namespace {

void require_unit_interval(double s, const char* what) {
  if (!(s >= 0.0 && s <= 1.0)) {
    throw Error(ErrorCode::kOutOfRange, std::string(what) + ": s = " + std::to_string(s) + " outside [0,1]");
  }
}

double gap_linear(double f, double kappa) { return 1.0 - f + f / kappa; }

// Integral of the bump over [0, t] for t <= 1/2.
double bump_integral(double t, double tol) {
  if (t <= 0.0) return 0.0;
  return adaptive_simpson(bump, 0.0, t, tol);
}

}  // namespace

double bump(double s) {
  if (!(s > 0.0 && s < 1.0)) return 0.0;
  return std::exp(-1.0 / (s * (1.0 - s)));
}

double exponential_normalization() {
  // Symmetric about 1/2, so twice the half integral; keeps f(1/2) = 1/2 exact.
  static const double c_e = 2.0 * bump_integral(0.5, 0.5e-14);
  return c_e;
}

double power_normalization(double p, double kappa) {
  if (kappa == 1.0) return 1.0;
  const double a = 1.0 - 1.0 / kappa;
  if (p == 1.0) return std::log(kappa) / a;
  return (std::pow(kappa, p - 1.0) - 1.0) / (a * (p - 1.0));
}

Schedule Schedule::vanilla() { return Schedule{}; }

Schedule Schedule::power(double p, double kappa) {
  if (!(p >= 1.0 && p <= 2.0)) throw Error(ErrorCode::kInvalidP, "p = " + std::to_string(p) + " outside [1,2]");
  if (!(kappa >= 1.0) || !std::isfinite(kappa)) {
    throw Error(ErrorCode::kOutOfRange, "kappa = " + std::to_string(kappa) + " must be finite and >= 1");
  }
  Schedule s;
  s.kind_ = ScheduleKind::kPower;
  s.p_ = p;
  s.kappa_ = kappa;
  s.c_p_ = power_normalization(p, kappa);
  return s;
}

Schedule Schedule::exponential(double quadrature_tol) {
  if (!(quadrature_tol > 0.0)) throw Error(ErrorCode::kOutOfRange, "quadrature_tol must be > 0");
  Schedule s;
  s.kind_ = ScheduleKind::kExponential;
  s.c_e_ = exponential_normalization();
  s.quadrature_tol_ = quadrature_tol;
  return s;
}

double Schedule::operator()(double s) const {
  switch (kind_) {
    case ScheduleKind::kVanilla: return eval_vanilla(s);
    case ScheduleKind::kPower:
      if (kappa_ == 1.0) return eval_vanilla(s);
      return p_ == 1.0 ? eval_power_one(kappa_, s) : eval_power_p(*this, s);
    case ScheduleKind::kExponential: return eval_exponential(*this, s);
  }
  return s;
}

std::vector<double> Schedule::sample(Index steps) const {
  if (steps < 1) throw Error(ErrorCode::kInvalidPlan, "sample needs at least one step");
  std::vector<double> f(static_cast<std::size_t>(steps) + 1);
  const double h = 1.0 / static_cast<double>(steps);
  if (kind_ != ScheduleKind::kExponential) {
    for (Index m = 0; m <= steps; ++m) f[m] = (*this)(std::min(1.0, m * h));
    f[steps] = 1.0;
    return f;
  }
  // cumulative[k] = integral of the bump over [0, k h] for k <= steps / 2.
  const Index half = steps / 2;
  std::vector<double> cumulative(static_cast<std::size_t>(half) + 1, 0.0);
  const double panel_tol = quadrature_tol_ / static_cast<double>(steps);
  for (Index k = 1; k <= half; ++k) {
    cumulative[k] = cumulative[k - 1] + adaptive_simpson(bump, (k - 1) * h, k * h, panel_tol, 30);
  }
  for (Index m = 0; m <= steps; ++m) {
    f[m] = (m <= half) ? cumulative[m] / c_e_ : 1.0 - cumulative[steps - m] / c_e_;
  }
  return f;
}

std::string Schedule::label() const {
  switch (kind_) {
    case ScheduleKind::kVanilla: return "vanilla";
    case ScheduleKind::kPower: {
      char buf[32];
      std::snprintf(buf, sizeof(buf), "aqc(%g)", p_);
      return buf;
    }
    case ScheduleKind::kExponential: return "aqc(exp)";
  }
  return "unknown";
}

double eval_vanilla(double s) {
  require_unit_interval(s, "eval_vanilla");
  return s;
}

double eval_power_p(const Schedule& sched, double s) {
  require_unit_interval(s, "eval_power_p");
  const double p = sched.p();
  if (!(p > 1.0 && p <= 2.0)) throw Error(ErrorCode::kInvalidP, "eval_power_p needs p in (1,2]");
  const double kappa = sched.kappa();
  if (!(kappa > 1.0)) throw Error(ErrorCode::kOutOfRange, "eval_power_p needs kappa > 1");
  if (s == 1.0) return 1.0;
  if (p == 2.0) return kappa * s / (1.0 + s * (kappa - 1.0));
  const double base = 1.0 + s * (std::pow(kappa, p - 1.0) - 1.0);
  return kappa / (kappa - 1.0) * (1.0 - std::pow(base, 1.0 / (1.0 - p)));
}

double eval_power_one(double kappa, double s) {
  require_unit_interval(s, "eval_power_one");
  if (!(kappa > 1.0)) throw Error(ErrorCode::kOutOfRange, "eval_power_one needs kappa > 1");
  if (s == 1.0) return 1.0;
  return kappa / (kappa - 1.0) * -std::expm1(-s * std::log(kappa));
}

double eval_exponential(const Schedule& sched, double s) {
  require_unit_interval(s, "eval_exponential");
  if (sched.kind() != ScheduleKind::kExponential) {
    throw Error(ErrorCode::kOutOfRange, "eval_exponential called on " + sched.label());
  }
  const double c_e = sched.c_e();
  if (s <= 0.5) return bump_integral(s, sched.quadrature_tol()) / c_e;
  return 1.0 - bump_integral(1.0 - s, sched.quadrature_tol()) / c_e;
}

std::vector<SchedulePoint> ode_oracle(double kappa, double p, Index grid) {
  grid = std::max<Index>(grid, 10000);
  const double c_p =
      adaptive_simpson([&](double u) { return std::pow(gap_linear(u, kappa), -p); }, 0.0, 1.0, 1e-13);
  auto rhs = [&](double f) { return c_p * std::pow(gap_linear(f, kappa), p); };
  const double h = 1.0 / static_cast<double>(grid);
  std::vector<SchedulePoint> table;
  table.reserve(static_cast<std::size_t>(grid) + 1);
  double f = 0.0;
  table.push_back({0.0, f});
  for (Index i = 0; i < grid; ++i) {
    const double k1 = rhs(f);
    const double k2 = rhs(f + 0.5 * h * k1);
    const double k3 = rhs(f + 0.5 * h * k2);
    const double k4 = rhs(f + h * k3);
    f += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    table.push_back({static_cast<double>(i + 1) * h, f});
  }
  return table;
}

}  // namespace qlsp
