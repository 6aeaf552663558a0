#include <doctest.h>

#include <random>
#include <sstream>

#include "oracles.hpp"
#include "qlsp/error.hpp"
#include "qlsp/evolution.hpp"

using namespace qlsp;

namespace {

HamiltonianEmbedding pd_embedding(Index n, double kappa) {
  return build_pd_embedding(generate_pd({n, kappa, Family::kPdLaplacian}));
}

StateVector random_state(Index n, std::mt19937& rng) {
  std::normal_distribution<double> g;
  StateVector v(n);
  for (Index i = 0; i < n; ++i) v(i) = Complex(g(rng), g(rng));
  return v.normalized();
}

// Dense step-by-step reference using Taylor exponentials.
StateVector brute_force_evolve(const HamiltonianEmbedding& e, const EvolutionPlan& plan) {
  StateVector psi = e.initial_state;
  const double tau = plan.runtime / static_cast<double>(plan.steps);
  for (Index m = 1; m <= plan.steps; ++m) {
    const double f = plan.schedule(static_cast<double>(m) / static_cast<double>(plan.steps));
    psi = oracle::expm_minus_i(e.h1, tau * f) * psi;
    psi = oracle::expm_minus_i(e.h0, tau * (1.0 - f)) * psi;
  }
  return psi;
}

}  // namespace

TEST_CASE("plan construction") {
  const auto plan = EvolutionPlan::for_runtime(10.0, Schedule::vanilla());
  CHECK(plan.steps == 50);
  CHECK(plan.step_h() * static_cast<double>(plan.steps) == 1.0);
  CHECK(EvolutionPlan::for_runtime(10.1, Schedule::vanilla()).steps == 51);
  CHECK(EvolutionPlan::for_runtime(0.05, Schedule::vanilla()).steps == 1);
  CHECK(EvolutionPlan::for_runtime(96.0, Schedule::vanilla()).steps == 480);
  CHECK_THROWS_AS(EvolutionPlan::for_runtime(-1.0, Schedule::vanilla()), Error);
  EvolutionPlan bad{10.0, 49, Schedule::vanilla(), false};
  try {
    validate(bad);
    FAIL("expected InvalidPlan");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kInvalidPlan);
  }
  validate(EvolutionPlan{10.0, 400, Schedule::vanilla(), false});
}

TEST_CASE("fidelity and density error") {
  std::mt19937 rng(1);
  const StateVector t = random_state(6, rng);
  CHECK(fidelity(t, t) == doctest::Approx(1.0));
  StateVector w = random_state(6, rng);
  w -= t.dot(w) * t;
  w.normalize();
  CHECK(fidelity(w, t) < 1e-28);
  CHECK(density_error(w, t) == doctest::Approx(1.0));
  CHECK(density_error(t, t) < 1e-7);
  CHECK(fidelity((t + w) / std::sqrt(2.0), t) == doctest::Approx(0.5));
  CHECK_THROWS_AS(fidelity(t, random_state(5, rng)), Error);
  CHECK_THROWS_AS(fidelity(2.0 * t, t), Error);
}

TEST_CASE("density error is the distance between density matrices") {
  StateVector t = StateVector::Zero(4), psi = StateVector::Zero(4);
  t(0) = 1.0;
  psi(0) = std::sqrt(0.75);
  psi(2) = Complex(0.0, 0.5);
  CHECK(fidelity(psi, t) == doctest::Approx(0.75));
  CHECK(density_error(psi, t) == doctest::Approx(0.5));
  const ComplexMatrix diff = psi * psi.adjoint() - t * t.adjoint();
  CHECK(spectral_norm(diff) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("pure state identity on random pairs") {
  std::mt19937 rng(2024);
  for (int trial = 0; trial < 100; ++trial) {
    const Index n = 2 + static_cast<Index>(rng() % 63);
    const StateVector a = random_state(n, rng), b = random_state(n, rng);
    const double f = fidelity(a, b), d = density_error(a, b);
    CHECK(std::abs(d * d + f - 1.0) < 1e-12);
  }
}

TEST_CASE("identity matrix instance stays at the target") {
  QlspInstance inst;
  inst.a = ComplexMatrix::Identity(4, 4);
  inst.b = StateVector::Ones(4).normalized();
  inst.kappa = 1.0;
  inst.matrix_class = MatrixClass::kHermitianPd;
  const auto e = build_pd_embedding(inst);
  for (double t : {0.2, 3.0, 77.0}) {
    const auto r = evolve(e, EvolutionPlan::for_runtime(t, Schedule::exponential()));
    CHECK(std::abs(r.fidelity - 1.0) < 1e-10);
  }
}

TEST_CASE("evolve matches a dense brute force reference") {
  const auto e = pd_embedding(4, 10.0);
  for (const auto& s : {Schedule::vanilla(), Schedule::power(1.5, 10.0), Schedule::exponential()}) {
    const auto plan = EvolutionPlan::for_runtime(12.0, s);
    const auto r = evolve(e, plan);
    const StateVector ref = brute_force_evolve(e, plan);
    CHECK((r.final_state - ref).norm() < 1e-10);
    CHECK(r.fidelity == doctest::Approx(oracle::overlap2(ref, e.target_state)).epsilon(1e-10));
  }
  const auto g = build_general_embedding(generate_nonhermitian({3, 5.0, Family::kNonhermitianLaplacian}));
  const auto plan = EvolutionPlan::for_runtime(6.0, Schedule::power(1.0, 5.0));
  CHECK((evolve(g, plan).final_state - brute_force_evolve(g, plan)).norm() < 1e-10);
}

TEST_CASE("longer runtime improves fidelity") {
  const auto e = pd_embedding(4, 10.0);
  const double f100 = evolve(e, EvolutionPlan::for_runtime(100.0, Schedule::exponential())).fidelity;
  const double f200 = evolve(e, EvolutionPlan::for_runtime(200.0, Schedule::exponential())).fidelity;
  CHECK(f200 > f100);
}

TEST_CASE("vanilla loses to AQC(1.5) at equal runtime") {
  const auto e = pd_embedding(64, 10.0);
  const SplitPropagator prop(e);
  const double vanilla = evolve(e, prop, EvolutionPlan::for_runtime(1000.0, Schedule::vanilla())).fidelity;
  const double power = evolve(e, prop, EvolutionPlan::for_runtime(1000.0, Schedule::power(1.5, 10.0))).fidelity;
  CHECK(vanilla < power);
}

TEST_CASE("dark state protection and norm preservation") {
  const auto e = pd_embedding(16, 10.0);
  const auto r = evolve(e, EvolutionPlan::for_runtime(400.0, Schedule::power(1.5, 10.0)));
  CHECK(r.dark_overlap_max <= 1e-10);
  CHECK(std::abs(r.final_state.norm() - 1.0) < 1e-10);
  CHECK(std::abs(r.density_error * r.density_error + r.fidelity - 1.0) < 1e-10);

  const auto g = build_general_embedding(generate_nonhermitian({8, 10.0, Family::kNonhermitianLaplacian}));
  CHECK(evolve(g, EvolutionPlan::for_runtime(200.0, Schedule::exponential())).dark_overlap_max <= 1e-10);
}

TEST_CASE("norm drift without renormalization") {
  // The split propagator only applies unitary factors; 10^5 steps must not leave the unit sphere.
  const auto e = pd_embedding(8, 10.0);
  const SplitPropagator prop(e);
  StateVector c1 = prop.to_h1(e.initial_state);
  StateVector c0(c1.size());
  for (int m = 0; m < 100000; ++m) {
    prop.phase_h1(c1, 0.1);
    prop.h1_to_h0(c1, c0);
    prop.phase_h0(c0, 0.1);
    prop.h0_to_h1(c0, c1);
  }
  CHECK(std::abs(c1.norm() - 1.0) < 1e-8);
}

TEST_CASE("first order trotter convergence") {
  const auto e = pd_embedding(8, 10.0);
  const SplitPropagator prop(e);
  const Schedule s = Schedule::exponential();
  const double t = 20.0;
  const StateVector ref = evolve(e, prop, EvolutionPlan{t, 1600, s, false}).final_state;
  double prev = 0.0;
  for (Index m : {100, 200, 400}) {
    const double err = (evolve(e, prop, EvolutionPlan{t, m, s, false}).final_state - ref).norm();
    if (prev > 0.0) CHECK(prev / err >= 1.8);
    prev = err;
  }
}

TEST_CASE("step order is H1 factor first") {
  const auto e = pd_embedding(4, 10.0);
  const Schedule s = Schedule::vanilla();
  const auto r = evolve(e, EvolutionPlan{0.4, 2, s, false});
  const StateVector psi1 = oracle::expm_minus_i(e.h0, 0.1) * (oracle::expm_minus_i(e.h1, 0.1) * e.initial_state);
  const StateVector h1_first = oracle::expm_minus_i(e.h1, 0.2) * psi1;
  const StateVector p1 = oracle::expm_minus_i(e.h1, 0.1) * (oracle::expm_minus_i(e.h0, 0.1) * e.initial_state);
  const StateVector h0_first = oracle::expm_minus_i(e.h1, 0.2) * p1;
  CHECK((r.final_state - h1_first).norm() < 1e-12);
  CHECK((r.final_state - h0_first).norm() > 1e-6);
}

TEST_CASE("trace recording and CSV") {
  const auto e = pd_embedding(4, 10.0);
  const auto r = evolve(e, EvolutionPlan::for_runtime(600.0, Schedule::exponential(), 0.2, true));
  // M = 3000, stride 3, plus the s = 0 point
  CHECK(r.trace.size() == 1001);
  CHECK(r.trace.back().s == doctest::Approx(1.0));
  CHECK(r.trace.back().fidelity == doctest::Approx(r.fidelity));
  const auto small = evolve(e, EvolutionPlan::for_runtime(2.0, Schedule::exponential(), 0.2, true));
  CHECK(small.trace.size() == 11);
  std::ostringstream out;
  write_trace_csv(out, small.trace);
  const std::string text = out.str();
  CHECK(text.rfind("s,fidelity,dark_overlap\n", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 12);
  CHECK(evolve(e, EvolutionPlan::for_runtime(2.0, Schedule::exponential())).trace.empty());
}

TEST_CASE("evolve rejects mismatched inputs") {
  const auto e = pd_embedding(4, 10.0);
  const SplitPropagator wrong(pd_embedding(3, 10.0));
  CHECK_THROWS_AS(evolve(e, wrong, EvolutionPlan::for_runtime(1.0, Schedule::vanilla())), Error);
  CHECK_THROWS_AS(evolve(e, EvolutionPlan{10.0, 1, Schedule::vanilla(), false}), Error);
}
