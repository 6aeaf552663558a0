#include "qlsp/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "qlsp/error.hpp"

namespace qlsp {

namespace {

// Runs fn(0..count-1) on up to `threads` workers; results land in index order.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers = std::min<std::size_t>(count, static_cast<std::size_t>(std::max(1, threads)));
  std::vector<std::exception_ptr> errors(count);
  auto run = [&](std::size_t i) {
    try {
      fn(i);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) run(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) run(i);
      });
    }
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

std::string format_short(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.15g", v);
  return buf;
}

std::string format_full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

RuntimePoint probe(const HamiltonianEmbedding& emb, const SplitPropagator& prop, const Schedule& schedule, long k) {
  const double runtime = static_cast<double>(k) / kLatticePerUnit;
  const EvolutionPlan plan{runtime, static_cast<Index>(k), schedule, false};
  const EvolutionResult r = evolve(emb, prop, plan);
  return {runtime, plan.steps, r.fidelity, r.density_error};
}

SweepRow evaluate_point(const SweepConfig& cfg, double kappa, double target_fidelity, double target_value,
                        Index qaoa_depth) {
  const QlspInstance inst = generate({cfg.n_dim, kappa, cfg.family});
  const HamiltonianEmbedding emb = build_embedding(inst);
  SweepRow row;
  row.method = cfg.method.label();
  row.family = std::string(to_string(cfg.family));
  row.kappa = kappa;
  row.target = target_value;
  if (cfg.method.is_qaoa()) {
    const QaoaReport rep = optimize(emb, qaoa_depth, eps_for_fidelity(target_fidelity), cfg.optimizer);
    row.reached = rep.best_fidelity >= target_fidelity;
    row.runtime = rep.best_runtime_metric;
    row.steps = qaoa_depth;
    row.fidelity = rep.best_fidelity;
    row.density_error = std::sqrt(std::max(0.0, 1.0 - rep.best_fidelity));
    row.qaoa_depth = qaoa_depth;
    row.qaoa_runtime_metric = rep.best_runtime_metric;
    return row;
  }
  try {
    const RuntimePoint pt = min_runtime(emb, cfg.method.schedule(kappa), target_fidelity, cfg.search);
    row.reached = true;
    row.runtime = pt.runtime;
    row.steps = pt.steps;
    row.fidelity = pt.fidelity;
    row.density_error = pt.density_error;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kTargetUnreachable) throw;
    row.reached = false;
  }
  return row;
}

std::string fit_label(const SweepRow& row, FitAxis axis) {
  std::string label = row.method + " " + row.family;
  if (axis == FitAxis::kKappa) {
    label += " target=" + format_short(row.target);
  } else {
    label += " kappa=" + format_short(row.kappa);
  }
  return label + " vs " + std::string(to_string(axis));
}

double axis_value(const SweepRow& row, FitAxis axis) {
  switch (axis) {
    case FitAxis::kKappa: return row.kappa;
    case FitAxis::kInvEps: return 1.0 / row.target;
    case FitAxis::kLogInvEps: return std::log(1.0 / row.target);
  }
  return row.kappa;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_cell(const std::string& cell, const char* column) {
  try {
    std::size_t used = 0;
    const double v = std::stod(cell, &used);
    if (used == cell.size()) return v;
  } catch (const std::exception&) {
  }
  throw Error(ErrorCode::kParseError, std::string("bad value '") + cell + "' in column " + column);
}

const char* const kCsvHeader =
    "method,family,kappa,target,runtime_T,steps_M,fidelity,density_error,qaoa_depth,qaoa_runtime_metric";

}  // namespace

RuntimePoint min_runtime(const HamiltonianEmbedding& emb, const SplitPropagator& prop, const Schedule& schedule,
                         double target_fidelity, const RuntimeSearch& search) {
  if (!(target_fidelity > 0.0 && target_fidelity < 1.0)) {
    throw Error(ErrorCode::kInvalidConfig, "target fidelity must lie in (0,1)");
  }
  if (!(search.t_init > 0.0) || !(search.t_max >= search.t_init) || !(search.bisection_tol > 0.0)) {
    throw Error(ErrorCode::kInvalidConfig, "bad runtime search settings");
  }
  long hi = std::max(1L, std::lround(search.t_init * kLatticePerUnit));
  const long k_max = static_cast<long>(std::floor(search.t_max * kLatticePerUnit + 1e-9));
  RuntimePoint best = probe(emb, prop, schedule, hi);
  if (best.fidelity >= target_fidelity) return best;
  long lo = hi;
  while (true) {
    lo = hi;
    hi *= 2;
    if (hi > k_max) {
      if (lo >= k_max) {
        throw Error(ErrorCode::kTargetUnreachable, "fidelity " + format_full(target_fidelity) +
                                                       " not reached by T_max = " + format_short(search.t_max));
      }
      hi = k_max;
    }
    best = probe(emb, prop, schedule, hi);
    if (best.fidelity >= target_fidelity) break;
  }
  // Invariant: fidelity(lo) < target <= fidelity(hi).
  while (hi - lo > 1 && static_cast<double>(hi) > (1.0 + search.bisection_tol) * static_cast<double>(lo)) {
    const long mid = lo + (hi - lo) / 2;
    const RuntimePoint pt = probe(emb, prop, schedule, mid);
    if (pt.fidelity >= target_fidelity) {
      hi = mid;
      best = pt;
    } else {
      lo = mid;
    }
  }
  return best;
}

RuntimePoint min_runtime(const HamiltonianEmbedding& emb, const Schedule& schedule, double target_fidelity,
                         const RuntimeSearch& search) {
  const SplitPropagator prop(emb);
  return min_runtime(emb, prop, schedule, target_fidelity, search);
}

std::string Method::label() const {
  switch (kind) {
    case MethodKind::kVanilla: return "vanilla";
    case MethodKind::kPower: return Schedule::power(p, 2.0).label();
    case MethodKind::kExponential: return "aqc(exp)";
    case MethodKind::kQaoa: return "qaoa";
  }
  return "unknown";
}

Schedule Method::schedule(double kappa) const {
  switch (kind) {
    case MethodKind::kVanilla: return Schedule::vanilla();
    case MethodKind::kPower: return Schedule::power(p, kappa);
    case MethodKind::kExponential: return Schedule::exponential();
    case MethodKind::kQaoa: break;
  }
  throw Error(ErrorCode::kInvalidConfig, "QAOA has no adiabatic schedule");
}

Method Method::parse(const std::string& name, double p, Index depth) {
  if (name == "vanilla") return {MethodKind::kVanilla, p, depth};
  if (name == "aqc-p") {
    if (!(p >= 1.0 && p <= 2.0)) throw Error(ErrorCode::kInvalidP, "p must lie in [1,2]");
    return {MethodKind::kPower, p, depth};
  }
  if (name == "aqc-exp") return {MethodKind::kExponential, p, depth};
  if (name == "qaoa") return {MethodKind::kQaoa, p, depth};
  throw Error(ErrorCode::kInvalidConfig, "unknown method '" + name + "'");
}

Index qaoa_depth_for_kappa(double kappa) {
  const double depth = 8.0 + (60.0 - 8.0) * (kappa - 5.0) / (80.0 - 5.0);
  return std::max<Index>(1, static_cast<Index>(std::lround(depth)));
}

double fidelity_for_eps(double eps) { return 1.0 - eps * eps; }
double eps_for_fidelity(double fidelity) { return std::sqrt(1.0 - fidelity); }

void validate(const SweepConfig& cfg) {
  if (cfg.n_dim < 2) throw Error(ErrorCode::kInvalidConfig, "N must be >= 2");
  for (std::size_t i = 0; i < cfg.kappa_grid.size(); ++i) {
    if (!(cfg.kappa_grid[i] > 1.0)) throw Error(ErrorCode::kInvalidConfig, "kappa grid entries must be > 1");
    if (i > 0 && !(cfg.kappa_grid[i] > cfg.kappa_grid[i - 1])) {
      throw Error(ErrorCode::kInvalidConfig, "kappa grid must be strictly increasing");
    }
  }
  for (double f : cfg.target_fidelities) {
    if (!(f > 0.0 && f < 1.0)) throw Error(ErrorCode::kInvalidConfig, "target fidelity must lie in (0,1)");
  }
  for (double e : cfg.target_eps) {
    if (!(e > 0.0 && e < 1.0)) throw Error(ErrorCode::kInvalidConfig, "target eps must lie in (0,1)");
  }
}

ScalingFit fit_loglog(const std::vector<FitPoint>& points) {
  if (points.size() < 2) throw Error(ErrorCode::kDegenerateFit, "need at least two points");
  const double n = static_cast<double>(points.size());
  double mx = 0.0, my = 0.0;
  for (const auto& p : points) {
    if (!(p.x > 0.0) || !(p.runtime > 0.0)) throw Error(ErrorCode::kDegenerateFit, "points must be positive");
    mx += std::log(p.x);
    my += std::log(p.runtime);
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (const auto& p : points) {
    const double dx = std::log(p.x) - mx;
    const double dy = std::log(p.runtime) - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx == 0.0) throw Error(ErrorCode::kDegenerateFit, "all x values are equal");
  ScalingFit fit;
  fit.exponent = sxy / sxx;
  fit.intercept = my - fit.exponent * mx;
  fit.r_squared = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  fit.points = points;
  return fit;
}

std::string_view to_string(FitAxis axis) {
  switch (axis) {
    case FitAxis::kKappa: return "kappa";
    case FitAxis::kInvEps: return "inv_eps";
    case FitAxis::kLogInvEps: return "log_inv_eps";
  }
  return "kappa";
}

FitAxis parse_fit_axis(std::string_view text) {
  if (text == "kappa") return FitAxis::kKappa;
  if (text == "inv_eps") return FitAxis::kInvEps;
  if (text == "log_inv_eps") return FitAxis::kLogInvEps;
  throw Error(ErrorCode::kInvalidConfig, "unknown fit axis '" + std::string(text) + "'");
}

std::vector<LabeledFit> fit_rows(const std::vector<SweepRow>& rows, FitAxis axis) {
  std::vector<std::string> order;
  std::map<std::string, std::vector<FitPoint>> groups;
  for (const auto& row : rows) {
    const std::string label = fit_label(row, axis);
    if (!groups.count(label)) order.push_back(label);
    auto& pts = groups[label];
    if (row.reached) pts.push_back({axis_value(row, axis), row.runtime});
  }
  std::vector<LabeledFit> fits;
  for (const auto& label : order) {
    LabeledFit lf{label, axis, std::nullopt};
    const auto& pts = groups[label];
    if (pts.size() >= kMinSweepFitPoints) lf.fit = fit_loglog(pts);
    fits.push_back(std::move(lf));
  }
  return fits;
}

SweepResult sweep_kappa(const SweepConfig& cfg) {
  validate(cfg);
  struct Job {
    double kappa;
    double target;
  };
  std::vector<Job> jobs;
  for (double target : cfg.target_fidelities) {
    for (double kappa : cfg.kappa_grid) jobs.push_back({kappa, target});
  }
  SweepResult result;
  result.rows.resize(jobs.size());
  const int threads = cfg.threads > 0 ? cfg.threads : default_thread_count();
  parallel_for(jobs.size(), threads, [&](std::size_t i) {
    const Index depth = cfg.method.depth > 0 ? cfg.method.depth : qaoa_depth_for_kappa(jobs[i].kappa);
    result.rows[i] = evaluate_point(cfg, jobs[i].kappa, jobs[i].target, jobs[i].target, depth);
  });
  result.fits = fit_rows(result.rows, FitAxis::kKappa);
  return result;
}

SweepResult sweep_epsilon(const SweepConfig& cfg, double kappa_fixed) {
  validate(cfg);
  if (!(kappa_fixed > 1.0)) throw Error(ErrorCode::kInvalidConfig, "kappa must be > 1");
  SweepResult result;
  result.rows.resize(cfg.target_eps.size());
  const int threads = cfg.threads > 0 ? cfg.threads : default_thread_count();
  const Index depth = cfg.method.depth > 0 ? cfg.method.depth : 20;
  parallel_for(cfg.target_eps.size(), threads, [&](std::size_t i) {
    const double eps = cfg.target_eps[i];
    result.rows[i] = evaluate_point(cfg, kappa_fixed, fidelity_for_eps(eps), eps, depth);
  });
  result.fits = fit_rows(result.rows, FitAxis::kInvEps);
  if (cfg.method.kind == MethodKind::kExponential || cfg.method.is_qaoa()) {
    for (auto& f : fit_rows(result.rows, FitAxis::kLogInvEps)) result.fits.push_back(std::move(f));
  }
  return result;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << kCsvHeader << "\n";
  for (const auto& r : rows) {
    out << r.method << ',' << r.family << ',' << format_short(r.kappa) << ',' << format_short(r.target) << ',';
    if (r.reached) {
      out << format_short(r.runtime) << ',' << r.steps << ',' << format_full(r.fidelity) << ','
          << format_full(r.density_error);
    } else {
      out << "nan,0,nan,nan";
    }
    out << ',' << r.qaoa_depth << ',' << (r.reached ? format_short(r.qaoa_runtime_metric) : "nan") << "\n";
  }
}

std::vector<SweepRow> read_sweep_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::kParseError, "empty sweep CSV");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kCsvHeader) throw Error(ErrorCode::kParseError, "unexpected CSV header '" + line + "'");
  std::vector<SweepRow> rows;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = split_csv(line);
    if (cells.size() != 10) throw Error(ErrorCode::kParseError, "expected 10 columns in '" + line + "'");
    SweepRow r;
    r.method = cells[0];
    r.family = cells[1];
    r.kappa = parse_cell(cells[2], "kappa");
    r.target = parse_cell(cells[3], "target");
    r.reached = cells[4] != "nan";
    if (r.reached) {
      r.runtime = parse_cell(cells[4], "runtime_T");
      r.steps = static_cast<Index>(parse_cell(cells[5], "steps_M"));
      r.fidelity = parse_cell(cells[6], "fidelity");
      r.density_error = parse_cell(cells[7], "density_error");
      r.qaoa_runtime_metric = parse_cell(cells[9], "qaoa_runtime_metric");
    }
    r.qaoa_depth = static_cast<Index>(parse_cell(cells[8], "qaoa_depth"));
    rows.push_back(std::move(r));
  }
  return rows;
}

void write_sweep_csv(const std::filesystem::path& path, const std::vector<SweepRow>& rows) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kParseError, "cannot open " + path.string() + " for writing");
  write_sweep_csv(out, rows);
}

std::vector<SweepRow> read_sweep_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kParseError, "cannot open " + path.string());
  return read_sweep_csv(in);
}

std::string sweep_config_json(const SweepConfig& cfg, const std::string& kind, double kappa_fixed) {
  nlohmann::ordered_json j;
  j["sweep"] = kind;
  j["method"] = cfg.method.label();
  if (cfg.method.kind == MethodKind::kPower) j["p"] = cfg.method.p;
  if (cfg.method.is_qaoa()) {
    j["qaoa_depth"] = cfg.method.depth > 0 ? nlohmann::ordered_json(cfg.method.depth)
                                           : nlohmann::ordered_json("linear 8 at kappa=5 to 60 at kappa=80");
  }
  j["family"] = std::string(to_string(cfg.family));
  j["n"] = cfg.n_dim;
  if (kind == "kappa") {
    j["kappas"] = cfg.kappa_grid;
    j["targets"] = cfg.target_fidelities;
  } else {
    j["kappa"] = kappa_fixed;
    j["eps"] = cfg.target_eps;
  }
  j["trotter_step"] = 1.0 / kLatticePerUnit;
  j["search"] = {{"t_init", cfg.search.t_init}, {"t_max", cfg.search.t_max},
                 {"bisection_tol", cfg.search.bisection_tol}};
  const auto& o = cfg.optimizer;
  j["optimizer"] = {{"direction", o.direction == DescentDirection::kLbfgs ? "lbfgs" : "steepest"},
                    {"gradient", o.gradient == GradientMethod::kAdjoint ? "adjoint" : "central_difference"},
                    {"armijo_c", o.armijo_c},
                    {"shrink", o.shrink},
                    {"initial_step", o.initial_step},
                    {"max_iterations", o.max_iterations},
                    {"warm_start_per_layer", o.warm_start_per_layer}};
  return j.dump(2);
}

int default_thread_count() {
  if (const char* env = std::getenv("QLSP_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace qlsp
