#include "qlsp/qaoa.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <string>

#include "qlsp/error.hpp"
#include "qlsp/evolution.hpp"
#include "qlsp/schedules.hpp"

namespace qlsp {

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

// 2 Im(sum conj(mu_k) lambda_k y_k)
double phase_derivative(const StateVector& mu, const RealVector& lambda, const StateVector& y) {
  double acc = 0.0;
  for (Index k = 0; k < y.size(); ++k) acc += lambda(k) * (std::conj(mu(k)) * y(k)).imag();
  return 2.0 * acc;
}

}  // namespace

double QaoaParams::runtime_metric() const {
  double total = 0.0;
  for (double b : betas) total += std::abs(b);
  for (double g : gammas) total += std::abs(g);
  return total;
}

std::vector<double> QaoaParams::flatten() const {
  std::vector<double> theta(betas);
  theta.insert(theta.end(), gammas.begin(), gammas.end());
  return theta;
}

QaoaParams QaoaParams::unflatten(const std::vector<double>& theta) {
  if (theta.size() % 2 != 0) throw Error(ErrorCode::kInvalidConfig, "odd parameter count");
  const auto half = static_cast<std::ptrdiff_t>(theta.size() / 2);
  return {{theta.begin(), theta.begin() + half}, {theta.begin() + half, theta.end()}};
}

void validate(const QaoaParams& params) {
  if (params.betas.empty()) throw Error(ErrorCode::kInvalidConfig, "QAOA depth must be >= 1");
  if (params.betas.size() != params.gammas.size()) {
    throw Error(ErrorCode::kInvalidConfig, "beta and gamma counts differ");
  }
  for (double v : params.flatten()) {
    if (!std::isfinite(v)) throw Error(ErrorCode::kInvalidConfig, "non-finite angle");
  }
}

QaoaParams adiabatic_warm_start(Index depth, double runtime) {
  if (depth < 1) throw Error(ErrorCode::kInvalidConfig, "QAOA depth must be >= 1");
  const std::vector<double> f = Schedule::exponential().sample(depth);
  const double h = 1.0 / static_cast<double>(depth);
  QaoaParams params;
  for (Index i = 1; i <= depth; ++i) {
    params.betas.push_back(h * runtime * (1.0 - f[static_cast<std::size_t>(i)]));
    params.gammas.push_back(h * runtime * f[static_cast<std::size_t>(i)]);
  }
  return params;
}

QaoaCircuit::QaoaCircuit(const HamiltonianEmbedding& emb)
    : emb_(emb), prop_(emb), initial_h0_(prop_.to_h0(emb.initial_state)) {}

StateVector QaoaCircuit::forward_h1(const QaoaParams& params) const {
  validate(params);
  if (prop_.dim() != emb_.initial_state.size()) throw Error(ErrorCode::kDimensionMismatch, "QAOA state");
  StateVector c0 = initial_h0_;
  StateVector c1(prop_.dim());
  const Index depth = params.depth();
  for (Index i = 0; i < depth; ++i) {
    if (i > 0) prop_.h1_to_h0(c1, c0);
    prop_.phase_h0(c0, params.betas[i]);
    prop_.h0_to_h1(c0, c1);
    prop_.phase_h1(c1, params.gammas[i]);
  }
  return c1;
}

StateVector QaoaCircuit::apply(const QaoaParams& params) const {
  StateVector psi = prop_.from_h1(forward_h1(params));
  return psi / psi.norm();
}

double QaoaCircuit::objective(const QaoaParams& params) const {
  const StateVector c1 = forward_h1(params);
  const RealVector& lambda = prop_.h1_eig().eigenvalues;
  double acc = 0.0;
  for (Index k = 0; k < c1.size(); ++k) acc += lambda(k) * lambda(k) * std::norm(c1(k));
  return std::sqrt(acc / c1.squaredNorm());
}

std::vector<double> QaoaCircuit::adjoint_gradient(const QaoaParams& params) const {
  const Index depth = params.depth();
  StateVector y = forward_h1(params);
  const RealVector& lambda0 = prop_.h0_eig().eigenvalues;
  const RealVector& lambda1 = prop_.h1_eig().eigenvalues;
  // J = sum lambda1^2 |y|^2; mu = dJ / d conj(y).
  StateVector mu = (lambda1.array().square().cast<Complex>() * y.array()).matrix();
  const double value = std::sqrt(std::max(0.0, (mu.dot(y)).real()));
  std::vector<double> grad(static_cast<std::size_t>(2 * depth), 0.0);
  if (value == 0.0) return grad;

  StateVector tmp(prop_.dim());
  for (Index i = depth - 1; i >= 0; --i) {
    grad[static_cast<std::size_t>(depth + i)] = phase_derivative(mu, lambda1, y);
    prop_.phase_h1(y, -params.gammas[i]);
    prop_.phase_h1(mu, -params.gammas[i]);
    prop_.h1_to_h0(y, tmp);
    y.swap(tmp);
    prop_.h1_to_h0(mu, tmp);
    mu.swap(tmp);
    grad[static_cast<std::size_t>(i)] = phase_derivative(mu, lambda0, y);
    if (i > 0) {
      prop_.phase_h0(y, -params.betas[i]);
      prop_.phase_h0(mu, -params.betas[i]);
      prop_.h0_to_h1(y, tmp);
      y.swap(tmp);
      prop_.h0_to_h1(mu, tmp);
      mu.swap(tmp);
    }
  }
  // d sqrt(J) = dJ / (2 sqrt(J)).
  for (double& g : grad) g /= 2.0 * value;
  return grad;
}

std::vector<double> QaoaCircuit::fd_gradient(const QaoaParams& params, double fd_step) const {
  if (!(fd_step > 0.0)) throw Error(ErrorCode::kInvalidConfig, "fd_step must be > 0");
  std::vector<double> theta = params.flatten();
  std::vector<double> grad(theta.size());
  for (std::size_t j = 0; j < theta.size(); ++j) {
    const double saved = theta[j];
    theta[j] = saved + fd_step;
    const double up = objective(QaoaParams::unflatten(theta));
    theta[j] = saved - fd_step;
    const double down = objective(QaoaParams::unflatten(theta));
    theta[j] = saved;
    grad[j] = (up - down) / (2.0 * fd_step);
  }
  return grad;
}

StateVector apply_ansatz(const HamiltonianEmbedding& emb, const QaoaParams& params) {
  return QaoaCircuit(emb).apply(params);
}

double objective(const HamiltonianEmbedding& emb, const QaoaParams& params) {
  return QaoaCircuit(emb).objective(params);
}

std::vector<double> gradient(const HamiltonianEmbedding& emb, const QaoaParams& params, double fd_step) {
  return QaoaCircuit(emb).fd_gradient(params, fd_step);
}

QaoaReport optimize(const HamiltonianEmbedding& emb, Index depth, double eps, const OptimizerConfig& config) {
  if (depth < 1) throw Error(ErrorCode::kInvalidConfig, "QAOA depth must be >= 1");
  const QaoaCircuit circuit(emb);
  const double warm_runtime = config.warm_start_per_layer * static_cast<double>(depth);
  return optimize(circuit, adiabatic_warm_start(depth, warm_runtime), eps, config);
}

QaoaReport optimize(const QaoaCircuit& circuit, const QaoaParams& start, double eps, const OptimizerConfig& config) {
  if (!(eps > 0.0 && eps < 1.0)) throw Error(ErrorCode::kInvalidConfig, "eps must lie in (0,1)");
  if (!(config.armijo_c > 0.0 && config.armijo_c < 1.0) || !(config.shrink > 0.0 && config.shrink < 1.0) ||
      !(config.initial_step > 0.0) || config.max_iterations < 0) {
    throw Error(ErrorCode::kInvalidConfig, "bad optimizer settings");
  }
  validate(start);
  const HamiltonianEmbedding& emb = circuit.embedding();
  const double threshold = eps / emb.kappa;

  auto grad_of = [&](const QaoaParams& p) {
    return config.gradient == GradientMethod::kAdjoint ? circuit.adjoint_gradient(p)
                                                       : circuit.fd_gradient(p, config.fd_step);
  };
  auto fidelity_of = [&](const QaoaParams& p) { return fidelity(circuit.apply(p), emb.target_state); };

  QaoaReport report;
  report.params = start;
  report.objective = circuit.objective(start);
  report.fidelity = fidelity_of(start);
  report.best_params = start;
  report.best_fidelity = report.fidelity;
  report.best_runtime_metric = start.runtime_metric();

  if (config.log != nullptr) write_iterate_csv_header(*config.log);
  auto log_row = [&](int iter, double step) {
    if (config.log != nullptr) {
      write_iterate_csv_row(*config.log,
                            {iter, report.objective, report.fidelity, report.params.runtime_metric(), step});
    }
  };
  log_row(0, 0.0);

  // L-BFGS curvature pairs (s_k, y_k), newest last.
  std::vector<std::vector<double>> s_hist;
  std::vector<std::vector<double>> y_hist;
  auto direction_of = [&](const std::vector<double>& g) {
    std::vector<double> d(g.size());
    for (std::size_t j = 0; j < g.size(); ++j) d[j] = -g[j];
    if (config.direction != DescentDirection::kLbfgs || s_hist.empty()) return d;
    const std::size_t m = s_hist.size();
    std::vector<double> alpha(m);
    std::vector<double> q(g);
    for (std::size_t k = m; k-- > 0;) {
      alpha[k] = dot(s_hist[k], q) / dot(y_hist[k], s_hist[k]);
      for (std::size_t j = 0; j < q.size(); ++j) q[j] -= alpha[k] * y_hist[k][j];
    }
    const double gamma = dot(s_hist.back(), y_hist.back()) / dot(y_hist.back(), y_hist.back());
    for (double& v : q) v *= gamma;
    for (std::size_t k = 0; k < m; ++k) {
      const double beta = dot(y_hist[k], q) / dot(y_hist[k], s_hist[k]);
      for (std::size_t j = 0; j < q.size(); ++j) q[j] += (alpha[k] - beta) * s_hist[k][j];
    }
    for (std::size_t j = 0; j < q.size(); ++j) d[j] = -q[j];
    return d;
  };

  double steepest_step = config.initial_step;
  int iter = 0;
  std::vector<double> g = grad_of(report.params);
  while (true) {
    if (report.objective < threshold) {
      report.converged = true;
      break;
    }
    if (iter >= config.max_iterations) break;
    const double g2 = dot(g, g);
    if (!(g2 > 0.0) || !std::isfinite(g2)) break;
    const std::vector<double> theta = report.params.flatten();

    std::vector<double> d = direction_of(g);
    double slope = dot(g, d);
    bool quasi_newton = config.direction == DescentDirection::kLbfgs && !s_hist.empty();
    if (!(slope < 0.0)) {
      for (std::size_t j = 0; j < g.size(); ++j) d[j] = -g[j];
      slope = -g2;
      quasi_newton = false;
      s_hist.clear();
      y_hist.clear();
    }
    // Quasi-Newton directions carry their own scale and start from a unit step.
    double step = quasi_newton ? 1.0 : steepest_step;

    bool accepted = false;
    std::vector<double> trial(theta.size());
    double trial_objective = report.objective;
    while (step >= config.min_step) {
      for (std::size_t j = 0; j < theta.size(); ++j) trial[j] = theta[j] + step * d[j];
      trial_objective = circuit.objective(QaoaParams::unflatten(trial));
      if (trial_objective <= report.objective + config.armijo_c * step * slope) {
        accepted = true;
        break;
      }
      step *= config.shrink;
    }
    if (!accepted) break;

    ++iter;
    report.params = QaoaParams::unflatten(trial);
    report.objective = trial_objective;
    report.fidelity = fidelity_of(report.params);
    if (report.fidelity > report.best_fidelity) {
      report.best_fidelity = report.fidelity;
      report.best_params = report.params;
      report.best_runtime_metric = report.params.runtime_metric();
      report.best_iteration = iter;
    }
    log_row(iter, step);

    std::vector<double> g_next = grad_of(report.params);
    if (config.direction == DescentDirection::kLbfgs) {
      std::vector<double> sk(theta.size()), yk(theta.size());
      for (std::size_t j = 0; j < theta.size(); ++j) {
        sk[j] = trial[j] - theta[j];
        yk[j] = g_next[j] - g[j];
      }
      // Keep only pairs with positive curvature.
      if (dot(sk, yk) > 1e-12 * std::sqrt(dot(sk, sk) * dot(yk, yk))) {
        s_hist.push_back(std::move(sk));
        y_hist.push_back(std::move(yk));
        if (static_cast<int>(s_hist.size()) > config.lbfgs_memory) {
          s_hist.erase(s_hist.begin());
          y_hist.erase(y_hist.begin());
        }
      }
    }
    if (!quasi_newton) steepest_step = std::min(2.0 * step, 1e3 * config.initial_step);
    g = std::move(g_next);
  }
  report.iterations = iter;
  report.runtime_metric = report.params.runtime_metric();
  return report;
}

void write_iterate_csv_header(std::ostream& out) { out << "iter,objective,fidelity,runtime_metric,step_size\n"; }

void write_iterate_csv_row(std::ostream& out, const QaoaIterate& it) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g,%.17g,%.6g\n", it.iteration, it.objective, it.fidelity,
                it.runtime_metric, it.step_size);
  out << buf;
}

}  // namespace qlsp
