#include <doctest.h>

#include <cmath>

#include "qlsp/error.hpp"
#include "qlsp/quadrature.hpp"
#include "qlsp/schedules.hpp"

using namespace qlsp;

namespace {

double sup_vs_oracle(double kappa, double p, Index grid = 10000) {
  const Schedule s = Schedule::power(p, kappa);
  double worst = 0.0;
  for (const auto& pt : ode_oracle(kappa, p, grid)) worst = std::max(worst, std::abs(s(pt.s) - pt.f));
  return worst;
}

}  // namespace

TEST_CASE("adaptive simpson") {
  CHECK(adaptive_simpson([](double x) { return x * x; }, 0.0, 1.0, 1e-14) == doctest::Approx(1.0 / 3.0));
  CHECK(adaptive_simpson([](double x) { return std::sin(x); }, 0.0, M_PI, 1e-13) ==
        doctest::Approx(2.0).epsilon(1e-12));
  CHECK(std::abs(adaptive_simpson([](double x) { return std::exp(x); }, 0.0, 2.0, 1e-13) - std::expm1(2.0)) <
        1e-11);
}

TEST_CASE("vanilla schedule") {
  CHECK(eval_vanilla(0.0) == 0.0);
  CHECK(eval_vanilla(1.0) == 1.0);
  CHECK(eval_vanilla(0.3) == 0.3);
  CHECK_THROWS_AS(eval_vanilla(1.2), Error);
  CHECK(Schedule::vanilla().label() == "vanilla");
}

TEST_CASE("power schedule closed forms") {
  for (double p : {1.0, 1.25, 1.5, 2.0}) {
    for (double kappa : {2.0, 10.0, 100.0}) {
      const Schedule s = Schedule::power(p, kappa);
      CHECK(s(0.0) == 0.0);
      CHECK(std::abs(s(1.0) - 1.0) < 1e-14);
    }
  }
  CHECK(Schedule::power(2.0, 2.0)(0.5) == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  CHECK(eval_power_one(10.0, 0.5) == doctest::Approx(10.0 / 9.0 * (1.0 - std::pow(10.0, -0.5))).epsilon(1e-14));
  CHECK(eval_power_one(10.0, 0.5) == doctest::Approx(0.759746).epsilon(1e-6));
  CHECK(Schedule::power(1.0, std::exp(1.0)).c_p() ==
        doctest::Approx(std::exp(1.0) / (std::exp(1.0) - 1.0)).epsilon(1e-12));
  CHECK(Schedule::power(1.5, 10.0).label() == "aqc(1.5)");
}

TEST_CASE("power schedule errors") {
  CHECK_THROWS_AS(Schedule::power(0.5, 10.0), Error);
  try {
    Schedule::power(2.5, 10.0);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kInvalidP);
  }
  const Schedule s = Schedule::power(1.0, 10.0);
  CHECK_THROWS_AS(eval_power_p(s, 0.5), Error);
  CHECK_THROWS_AS(s(-0.1), Error);
}

TEST_CASE("power normalization matches quadrature") {
  for (double p : {1.0, 1.3, 2.0}) {
    for (double kappa : {2.0, 50.0}) {
      const double q = adaptive_simpson([&](double u) { return std::pow(1.0 - u + u / kappa, -p); }, 0.0, 1.0,
                                        1e-13);
      CHECK(power_normalization(p, kappa) == doctest::Approx(q).epsilon(1e-11));
    }
  }
}

TEST_CASE("closed forms agree with the RK4 oracle") {
  CHECK(sup_vs_oracle(2.0, 2.0) < 1e-8);
  CHECK(sup_vs_oracle(10.0, 1.0) < 1e-8);
  CHECK(sup_vs_oracle(10.0, 1.5) < 1e-8);
  for (double p : {1.0, 1.25, 1.5, 1.75, 2.0})
    for (double kappa : {2.0, 10.0, 100.0}) CHECK(sup_vs_oracle(kappa, p) < 1e-6);
}

TEST_CASE("oracle table") {
  const auto table = ode_oracle(10.0, 1.5, 10000);
  CHECK(table.size() == 10001);
  CHECK(std::abs(table.back().f - 1.0) <= 1e-6);
  for (std::size_t i = 1; i < table.size(); ++i) CHECK(table[i].f > table[i - 1].f);
}

TEST_CASE("exponential schedule") {
  const Schedule s = Schedule::exponential();
  CHECK(s.c_e() == doctest::Approx(0.0070).epsilon(0.01));
  CHECK(std::abs(s.c_e() - 0.00702985) < 1e-7);
  CHECK(s(0.0) == 0.0);
  CHECK(std::abs(s(1.0) - 1.0) < 1e-12);
  CHECK(std::abs(s(0.5) - 0.5) < s.quadrature_tol());
  for (double t : {0.05, 0.2, 0.37, 0.49}) CHECK(std::abs(s(t) + s(1.0 - t) - 1.0) < 1e-12);
  CHECK(bump(0.0) == 0.0);
  CHECK(bump(1.0) == 0.0);
  CHECK(s.label() == "aqc(exp)");
}

TEST_CASE("exponential schedule derivative") {
  const Schedule s = Schedule::exponential();
  const double d = 1e-4;
  for (double t : {0.2, 0.5, 0.8}) {
    const double fd = (s(t + d) - s(t - d)) / (2.0 * d);
    CHECK(fd == doctest::Approx(bump(t) / s.c_e()).epsilon(1e-6));
  }
  for (double t : {0.01, 0.99}) CHECK(std::abs((s(t + 1e-6) - s(t - 1e-6)) / 2e-6) <= 1e-20);
}

TEST_CASE("schedules are strictly increasing") {
  const std::vector<Schedule> all{Schedule::vanilla(), Schedule::power(1.0, 10.0), Schedule::power(1.5, 10.0),
                                  Schedule::power(2.0, 100.0), Schedule::exponential()};
  for (const auto& s : all) {
    double prev = s(0.0);
    // the bump vanishes to below double precision near the ends, so skip them
    const bool flat_ends = s.kind() == ScheduleKind::kExponential;
    for (int k = 1; k <= 1000; ++k) {
      const double t = k / 1000.0;
      const double v = s(t);
      if (!flat_ends || (t > 0.03 && t < 0.97)) CHECK(v > prev);
      CHECK(v >= prev);
      prev = v;
    }
  }
}

TEST_CASE("sampled schedules match pointwise evaluation") {
  const std::vector<Schedule> all{Schedule::vanilla(), Schedule::power(1.5, 10.0), Schedule::exponential()};
  for (const auto& s : all) {
    const auto v = s.sample(997);
    CHECK(v.size() == 998);
    // both paths integrate to quadrature_tol, which c_e^-1 amplifies
    for (Index m = 0; m <= 997; ++m) CHECK(std::abs(v[m] - s(m / 997.0)) < 1e-9);
  }
}
