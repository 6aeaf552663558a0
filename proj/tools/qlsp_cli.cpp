// qlsp: generate instances, solve them, and run runtime-scaling sweeps.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qlsp/bench.hpp"
#include "qlsp/error.hpp"
#include "qlsp/evolution.hpp"
#include "qlsp/hamiltonians.hpp"
#include "qlsp/problems.hpp"
#include "qlsp/qaoa.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitUnreachable = 2;

struct MethodArgs {
  std::string name = "aqc-exp";
  double p = 1.5;
  int depth = 0;
};

void add_method_options(CLI::App* cmd, MethodArgs& m) {
  cmd->add_option("--method", m.name, "vanilla | aqc-p | aqc-exp | qaoa")
      ->check(CLI::IsMember({"vanilla", "aqc-p", "aqc-exp", "qaoa"}));
  cmd->add_option("--p", m.p, "exponent for aqc-p, in [1,2]");
  cmd->add_option("--depth", m.depth, "QAOA depth (sweep-kappa default follows kappa, others 20)");
}

void add_search_options(CLI::App* cmd, qlsp::RuntimeSearch& s) {
  cmd->add_option("--t-init", s.t_init, "first runtime tried by the search");
  cmd->add_option("--t-max", s.t_max, "largest runtime tried before giving up");
  cmd->add_option("--bisection-tol", s.bisection_tol, "relative bracket width at which bisection stops");
}

void add_optimizer_options(CLI::App* cmd, qlsp::OptimizerConfig& o, std::string& direction) {
  cmd->add_option("--max-iter", o.max_iterations, "QAOA iteration cap");
  cmd->add_option("--descent", direction, "QAOA descent direction")->check(CLI::IsMember({"lbfgs", "steepest"}));
}

void apply_direction(qlsp::OptimizerConfig& o, const std::string& direction) {
  o.direction = direction == "steepest" ? qlsp::DescentDirection::kSteepest : qlsp::DescentDirection::kLbfgs;
}

std::string fmt(double v, const char* spec = "%.10g") {
  char buf[48];
  std::snprintf(buf, sizeof(buf), spec, v);
  return buf;
}

void print_fits(const std::vector<qlsp::LabeledFit>& fits) {
  for (const auto& lf : fits) {
    if (lf.fit) {
      std::cout << "fit " << lf.label << ": exponent " << fmt(lf.fit->exponent, "%.6f") << " intercept "
                << fmt(lf.fit->intercept, "%.6f") << " r2 " << fmt(lf.fit->r_squared, "%.6f") << " points "
                << lf.fit->points.size() << "\n";
    } else {
      std::cout << "fit " << lf.label << ": not enough reached points\n";
    }
  }
}

void report_missing(const std::vector<qlsp::SweepRow>& rows) {
  for (const auto& r : rows) {
    if (!r.reached) {
      std::cerr << "warning: " << r.method << " kappa=" << r.kappa << " target=" << r.target
                << " did not reach its target\n";
    }
  }
}

void write_rows(const std::string& out, const std::vector<qlsp::SweepRow>& rows) {
  if (out.empty() || out == "-") {
    qlsp::write_sweep_csv(std::cout, rows);
  } else {
    qlsp::write_sweep_csv(std::filesystem::path(out), rows);
  }
}

void write_sidecar(const std::string& path, const std::string& json) {
  std::ofstream js(path);
  if (!js) throw qlsp::Error(qlsp::ErrorCode::kParseError, "cannot open " + path + " for writing");
  js << json << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Classical simulation of adiabatic and QAOA linear-system solvers"};
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "write a test instance to a file");
  std::string gen_family = "pd";
  qlsp::Index gen_n = 64;
  double gen_kappa = 10.0;
  std::string gen_out;
  gen->add_option("--family", gen_family, "pd | nonh")->check(CLI::IsMember({"pd", "nonh"}));
  gen->add_option("--n", gen_n, "dimension N");
  gen->add_option("--kappa", gen_kappa, "condition number");
  gen->add_option("--out", gen_out, "output file")->required();

  // solve
  auto* solve = app.add_subcommand("solve", "solve one instance");
  std::string instance_path;
  bool allow_rescale = false;
  std::string solve_family = "pd";
  qlsp::Index solve_n = 64;
  double solve_kappa = 10.0;
  MethodArgs solve_method;
  double runtime = 0.0;
  double target_fidelity = 0.0;
  double target_eps = 0.0;
  std::string trace_path;
  qlsp::RuntimeSearch solve_search;
  qlsp::OptimizerConfig solve_opt;
  std::string solve_direction = "lbfgs";
  auto* inst_opt = solve->add_option("--instance", instance_path, "instance file");
  solve->add_flag("--allow-rescale", allow_rescale, "divide A by its spectral norm when it is not 1");
  auto* fam_opt =
      solve->add_option("--family", solve_family, "generate a pd | nonh instance")->check(CLI::IsMember({"pd", "nonh"}));
  solve->add_option("--n", solve_n, "dimension N of the generated instance");
  solve->add_option("--kappa", solve_kappa, "condition number of the generated instance");
  inst_opt->excludes(fam_opt);
  add_method_options(solve, solve_method);
  auto* rt_opt = solve->add_option("--runtime", runtime, "evolve for this runtime T");
  auto* tf_opt = solve->add_option("--target-fidelity", target_fidelity, "search for the runtime reaching F");
  auto* te_opt = solve->add_option("--target-eps", target_eps, "search for the runtime reaching density error E");
  rt_opt->excludes(tf_opt)->excludes(te_opt);
  tf_opt->excludes(te_opt);
  solve->add_option("--trace", trace_path, "CSV trace of the evolution (QAOA: optimizer iterations)");
  add_search_options(solve, solve_search);
  add_optimizer_options(solve, solve_opt, solve_direction);

  // sweep-kappa
  auto* swk = app.add_subcommand("sweep-kappa", "minimum runtime over a kappa grid");
  MethodArgs swk_method;
  std::string swk_family = "pd";
  qlsp::SweepConfig swk_cfg;
  std::string swk_out;
  std::string swk_json;
  std::string swk_direction = "lbfgs";
  add_method_options(swk, swk_method);
  swk->add_option("--family", swk_family, "pd | nonh")->check(CLI::IsMember({"pd", "nonh"}));
  swk->add_option("--n", swk_cfg.n_dim, "dimension N");
  swk->add_option("--targets", swk_cfg.target_fidelities, "target fidelities")->delimiter(',');
  swk->add_option("--kappas", swk_cfg.kappa_grid, "kappa grid")->delimiter(',');
  swk->add_option("--threads", swk_cfg.threads, "worker threads (default QLSP_THREADS or all cores)");
  swk->add_option("--out", swk_out, "CSV output (default stdout)");
  swk->add_option("--json", swk_json, "config sidecar (default <out>.json)");
  add_search_options(swk, swk_cfg.search);
  add_optimizer_options(swk, swk_cfg.optimizer, swk_direction);

  // sweep-eps
  auto* swe = app.add_subcommand("sweep-eps", "minimum runtime over a density-error grid");
  MethodArgs swe_method;
  std::string swe_family = "pd";
  qlsp::SweepConfig swe_cfg;
  double swe_kappa = 10.0;
  std::string swe_out;
  std::string swe_json;
  std::string swe_direction = "lbfgs";
  add_method_options(swe, swe_method);
  swe->add_option("--family", swe_family, "pd | nonh")->check(CLI::IsMember({"pd", "nonh"}));
  swe->add_option("--n", swe_cfg.n_dim, "dimension N");
  swe->add_option("--kappa", swe_kappa, "fixed condition number");
  swe->add_option("--eps", swe_cfg.target_eps, "density-error targets")->delimiter(',');
  swe->add_option("--threads", swe_cfg.threads, "worker threads (default QLSP_THREADS or all cores)");
  swe->add_option("--out", swe_out, "CSV output (default stdout)");
  swe->add_option("--json", swe_json, "config sidecar (default <out>.json)");
  add_search_options(swe, swe_cfg.search);
  add_optimizer_options(swe, swe_cfg.optimizer, swe_direction);

  // fit
  auto* fit = app.add_subcommand("fit", "log-log fits of a sweep CSV");
  std::string fit_in;
  std::string fit_x = "kappa";
  fit->add_option("--in", fit_in, "sweep CSV")->required();
  fit->add_option("--x", fit_x, "kappa | inv_eps | log_inv_eps")
      ->check(CLI::IsMember({"kappa", "inv_eps", "log_inv_eps"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (gen->parsed()) {
      const auto inst = qlsp::generate({gen_n, gen_kappa, qlsp::parse_family(gen_family)});
      qlsp::save_instance(inst, gen_out);
      std::cout << "wrote " << gen_out << " (N=" << inst.n_dim() << ", kappa=" << fmt(inst.kappa) << ", class "
                << qlsp::to_string(inst.matrix_class) << ")\n";
      return kExitOk;
    }

    if (solve->parsed()) {
      qlsp::QlspInstance inst;
      if (!instance_path.empty()) {
        std::vector<std::string> warnings;
        inst = qlsp::load_instance(instance_path, {allow_rescale}, &warnings);
        for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
      } else {
        inst = qlsp::generate({solve_n, solve_kappa, qlsp::parse_family(solve_family)});
      }
      const auto method =
          qlsp::Method::parse(solve_method.name, solve_method.p, solve_method.depth > 0 ? solve_method.depth : 20);
      const auto emb = qlsp::build_embedding(inst);
      std::cout << "method " << method.label() << "\nN " << inst.n_dim() << "\nkappa " << fmt(inst.kappa) << "\n";

      if (method.is_qaoa()) {
        if (*rt_opt) throw qlsp::Error(qlsp::ErrorCode::kInvalidConfig, "--runtime does not apply to qaoa");
        double eps = 0.1;
        if (*te_opt) eps = target_eps;
        if (*tf_opt) eps = qlsp::eps_for_fidelity(target_fidelity);
        apply_direction(solve_opt, solve_direction);
        std::unique_ptr<std::ofstream> log;
        if (!trace_path.empty()) {
          log = std::make_unique<std::ofstream>(trace_path);
          if (!*log) throw qlsp::Error(qlsp::ErrorCode::kParseError, "cannot open " + trace_path);
          solve_opt.log = log.get();
        }
        const auto rep = qlsp::optimize(emb, method.depth, eps, solve_opt);
        std::cout << "depth " << method.depth << "\niterations " << rep.iterations << "\nconverged "
                  << (rep.converged ? "yes" : "no") << "\nobjective " << fmt(rep.objective) << "\nfidelity "
                  << fmt(rep.fidelity, "%.12f") << "\nruntime_metric " << fmt(rep.runtime_metric)
                  << "\nbest_fidelity " << fmt(rep.best_fidelity, "%.12f") << "\nbest_runtime_metric "
                  << fmt(rep.best_runtime_metric) << "\n";
        const double need = qlsp::fidelity_for_eps(eps);
        return rep.best_fidelity >= need ? kExitOk : kExitUnreachable;
      }

      const auto schedule = method.schedule(inst.kappa);
      double t = runtime;
      if (!*rt_opt) {
        double target = 0.99;
        if (*tf_opt) target = target_fidelity;
        if (*te_opt) target = qlsp::fidelity_for_eps(target_eps);
        t = qlsp::min_runtime(emb, schedule, target, solve_search).runtime;
      }
      const auto plan = qlsp::EvolutionPlan::for_runtime(t, schedule, qlsp::kDefaultTrotterStep, !trace_path.empty());
      const auto res = qlsp::evolve(emb, plan);
      if (!trace_path.empty()) qlsp::write_trace_csv(std::filesystem::path(trace_path), res.trace);
      std::cout << "runtime_T " << fmt(plan.runtime) << "\nsteps_M " << plan.steps << "\nfidelity "
                << fmt(res.fidelity, "%.12f") << "\ndensity_error " << fmt(res.density_error, "%.6e")
                << "\ndark_overlap_max " << fmt(res.dark_overlap_max, "%.3e") << "\n";
      return kExitOk;
    }

    if (swk->parsed() || swe->parsed()) {
      const bool by_kappa = swk->parsed();
      MethodArgs& m = by_kappa ? swk_method : swe_method;
      qlsp::SweepConfig& cfg = by_kappa ? swk_cfg : swe_cfg;
      cfg.method = qlsp::Method::parse(m.name, m.p, m.depth > 0 ? m.depth : (by_kappa ? 0 : 20));
      cfg.family = qlsp::parse_family(by_kappa ? swk_family : swe_family);
      apply_direction(cfg.optimizer, by_kappa ? swk_direction : swe_direction);
      const auto result = by_kappa ? qlsp::sweep_kappa(cfg) : qlsp::sweep_epsilon(cfg, swe_kappa);
      const std::string& out = by_kappa ? swk_out : swe_out;
      std::string json = by_kappa ? swk_json : swe_json;
      write_rows(out, result.rows);
      if (json.empty() && !out.empty() && out != "-") json = out + ".json";
      if (!json.empty()) {
        write_sidecar(json, qlsp::sweep_config_json(cfg, by_kappa ? "kappa" : "eps", swe_kappa));
      }
      report_missing(result.rows);
      if (!out.empty() && out != "-") print_fits(result.fits);
      return kExitOk;
    }

    if (fit->parsed()) {
      const auto rows = qlsp::read_sweep_csv(std::filesystem::path(fit_in));
      const auto fits = qlsp::fit_rows(rows, qlsp::parse_fit_axis(fit_x));
      if (fits.empty()) throw qlsp::Error(qlsp::ErrorCode::kDegenerateFit, "no rows in " + fit_in);
      print_fits(fits);
      return kExitOk;
    }
  } catch (const qlsp::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code() == qlsp::ErrorCode::kTargetUnreachable ? kExitUnreachable : kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
