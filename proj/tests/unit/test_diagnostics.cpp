#include "doctest.h"

#include <cmath>
#include <sstream>

#include "oracle/oracle.hpp"
#include "sweep/diagnostics.hpp"
#include "sweep/errors.hpp"

using namespace sweep;

namespace {

Vector scalar(double x) { return Vector::Constant(1, x); }

// The constant formulas written out a second time, term by term.
struct Expected {
  double c, K1, K2, K3, K4, K5, K6, K7, sigma;
};

Expected recompute(double T, double Lc, double Lh, double h0, double x0, double gamma,
                   const Schedule& s) {
  Expected e{};
  const double rg = std::sqrt(gamma);
  e.c = (std::sqrt(s.epsilon) + s.eta) / s.mu;
  e.K1 = T * (Lc + 2 * h0 + 2 * rg + e.c) * std::exp(2 * Lh * T);
  e.K2 = e.K1 + x0 + T * (Lc + 2 * (h0 + Lh * e.K1 + rg) + e.c);
  e.K3 = Lc + h0 + Lh * (e.K2 + x0) + rg;
  e.K4 = Lc + 2 * h0 + 2 * Lh * e.K1 + 2 * rg;
  e.K5 = e.K4 + Lc + 2 * (h0 + Lh * e.K1) + 2 * rg;
  e.K6 = e.K5 + Lc;
  e.K7 = e.c + Lc + 2 * (h0 + Lh * e.K1 + rg);
  e.sigma = 2 * s.epsilon + 2 * e.K3 * s.eta * s.mu + 4 * s.eta * s.eta;
  return e;
}

}  // namespace

TEST_SUITE("diagnostics") {

TEST_CASE("c_frak for n = 100 with exponents (2.1, 1.05)") {
  const Schedule s = make_schedule(100, 1.0, 2.1, 1.05);
  CHECK(c_frak_of(s) == doctest::Approx(1.588).epsilon(1e-3));
}

TEST_CASE("degenerate limit leaves only ||x0|| in K2") {
  const Schedule s = make_schedule(1000000, 1.0, 3.0, 2.0);
  const auto k = theorem_constants(1.0, 0.0, 0.0, 0.0, 2.5, 1e-30, s, 0.0);
  CHECK(k.K1 < 1e-14);
  CHECK(k.K2 == doctest::Approx(2.5));
  CHECK(k.K3 < 1e-14);
  CHECK(k.K7 < 1e-14);
}

TEST_CASE("constants match an independent transcription") {
  oracle::Gen g(41);
  for (int trial = 0; trial < 200; ++trial) {
    const double T = g.uniform(0.1, 3.0), Lc = g.uniform(0, 5), Lh = g.uniform(0, 2);
    const double h0 = g.uniform(0, 10), x0 = g.uniform(0, 4);
    const double gamma = g.log_uniform(1e-12, 1.0);
    const Schedule s = make_schedule(static_cast<std::size_t>(g.integer(1, 2000)), T,
                                     g.uniform(2.01, 4.0), g.uniform(1.01, 3.0));
    const auto k = theorem_constants(T, Lc, Lh, h0, x0, gamma, s);
    const Expected e = recompute(T, Lc, Lh, h0, x0, gamma, s);
    CHECK(k.c_frak == doctest::Approx(e.c));
    CHECK(k.K1 == doctest::Approx(e.K1));
    CHECK(k.K2 == doctest::Approx(e.K2));
    CHECK(k.K3 == doctest::Approx(e.K3));
    CHECK(k.K4 == doctest::Approx(e.K4));
    CHECK(k.K5 == doctest::Approx(e.K5));
    CHECK(k.K6 == k.K5 + Lc);
    CHECK(k.K7 == doctest::Approx(e.K7));
    CHECK(k.sigma_n == doctest::Approx(e.sigma));
    CHECK(k.K2 >= k.K1);
  }
}

TEST_CASE("constants reject bad inputs") {
  const Schedule s = make_schedule(10, 1.0, 2.1, 1.05);
  CHECK_THROWS_AS(theorem_constants(1.0, -1.0, 0, 0, 0, 1e-6, s), InvalidArgument);
  CHECK_THROWS_AS(theorem_constants(1.0, 0, 0, 0, 0, 0.0, s), InvalidArgument);
}

TEST_CASE("rate envelope decreases to zero") {
  double prev = 1e300;
  for (std::size_t n = 2; n <= 4096; n *= 2) {
    const double env = rate_envelope(make_schedule(n, 1.0, 2.1, 1.05));
    CHECK(env < prev);
    prev = env;
  }
  // The slowest term is sqrt(eps)/mu = mu^0.25 here.
  CHECK(rate_envelope(make_schedule(100000000, 1.0, 2.5, 1.5)) ==
        doctest::Approx(1e-2).epsilon(0.02));
}

TEST_CASE("stationary interior run passes every bound") {
  const auto set = SetDescriptor::box(Vector::Zero(2), Vector::Ones(2));
  const auto p = Perturbation::zero();
  const Point x0 = Vector::Constant(2, 0.4);
  const Schedule s = make_schedule(40, 1.0, 2.1, 1.05);
  const auto traj = catching_up_run(set, p, x0, s);
  const auto k = theorem_constants(1.0, 0.0, 0.0, 0.0, x0.norm(), p.gamma, s);
  const auto report = verify_bounds(traj, k, set, p);
  CHECK(report.all_passed());
  for (const auto& c : report.checks) {
    CHECK(c.worst_margin >= 0.0);
    CHECK(c.evaluations > 0);
  }
  for (double d : feasibility_profile(traj, set)) CHECK(d == 0.0);
}

TEST_CASE("a displaced node breaks bound (iii)") {
  const auto set =
      SetDescriptor::translating(SetDescriptor::halfspace(scalar(1.0), 0.0), scalar(1.0));
  const auto p = Perturbation::zero();
  const Schedule s = make_schedule(50, 1.0, 2.1, 1.05);
  auto traj = catching_up_run(set, p, scalar(0.0), s);
  const auto k = theorem_constants(1.0, 1.0, 0.0, 0.0, 0.0, p.gamma, s);
  CHECK(verify_bounds(traj, k, set, p).all_passed());

  traj.nodes[20](0) += 10.0 * k.K2;
  const auto report = verify_bounds(traj, k, set, p);
  const auto& iii = report.get("a_iii");
  CHECK_FALSE(iii.passed);
  CHECK(iii.worst_time == doctest::Approx(traj.grid[20]));
  CHECK_THROWS_AS(report.get("nope"), InvalidArgument);
}

TEST_CASE("feasibility profile flags an infeasible node") {
  const auto set = SetDescriptor::nonnegative_orthant();
  auto traj = catching_up_run(set, Perturbation::zero(), scalar(1.0),
                              make_schedule(10, 1.0, 2.1, 1.05));
  traj.nodes[4](0) = -0.5;
  const auto prof = feasibility_profile(traj, set);
  CHECK(prof[4] == doctest::Approx(0.5));
  CHECK(prof[3] == 0.0);
}

TEST_CASE("exact projection on a smooth problem converges at order one") {
  // x' = -x inside [0, inf) from x0 = 1: the constraint never binds.
  Perturbation p;
  p.f = [](double, const Point& x) -> Vector { return -x; };
  p.h = [](const Point& x) { return x.norm(); };
  p.lipschitz_h = 1.0;
  StudyProblem prob{SetDescriptor::nonnegative_orthant(), p, scalar(1.0), 1.0, 2.1,
                    1.05, RunOptions{}};
  const auto table = convergence_study(prob, {50, 100, 200, 400}, 3200);
  CHECK(table.errors_strictly_decreasing());
  for (std::size_t i = 0; i + 1 < table.rows.size(); ++i) {
    REQUIRE(table.rows[i].empirical_order.has_value());
    CHECK(*table.rows[i].empirical_order == doctest::Approx(1.0).epsilon(0.1));
  }
  CHECK_FALSE(table.rows.back().empirical_order.has_value());

  std::ostringstream csv;
  table.write_csv(csv);
  CHECK(csv.str().rfind("n,mu,eps,eta,e_n,env_n,ratio,empirical_order\n", 0) == 0);
}

TEST_CASE("study argument checks") {
  StudyProblem prob{SetDescriptor::nonnegative_orthant(), Perturbation::zero(),
                    scalar(1.0), 1.0, 2.1, 1.05, RunOptions{}};
  CHECK_THROWS_AS(convergence_study(prob, {100, 50}, 800), InvalidArgument);
  CHECK_THROWS_AS(convergence_study(prob, {50, 100}, 100), InvalidArgument);
  CHECK_THROWS_AS(convergence_study(prob, {}, 100), InvalidArgument);
}

}
