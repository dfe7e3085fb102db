#include "doctest.h"

#include <cmath>
#include <limits>
#include <memory>

#include "oracle/oracle.hpp"
#include "sweep/dual_qp.hpp"
#include "sweep/errors.hpp"
#include "sweep/set_model.hpp"

using namespace sweep;

namespace {

const double kInf = std::numeric_limits<double>::infinity();

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

}  // namespace

TEST_SUITE("set_model") {

TEST_CASE("halfspace distance and projection") {
  const auto s = SetDescriptor::halfspace(vec({3.0, 4.0}), 5.0);
  CHECK(distance_exact(s, 0.0, vec({0.0, 0.0})) == doctest::Approx(1.0));
  CHECK(distance_exact(s, 0.0, vec({3.0, 4.0})) == 0.0);
  const Point p = project_exact(s, 0.0, vec({0.0, 0.0}));
  CHECK(p(0) == doctest::Approx(0.6));
  CHECK(p(1) == doctest::Approx(0.8));
  CHECK(s.lipschitz_const() == 0.0);
}

TEST_CASE("box with an infinite side") {
  const auto s = SetDescriptor::box(vec({0.0, -kInf}), vec({1.0, 2.0}));
  CHECK(distance_exact(s, 0.0, vec({-3.0, 6.0})) == doctest::Approx(5.0));
  CHECK(distance_exact(s, 0.0, vec({0.5, -1e9})) == 0.0);
  CHECK_THROWS_AS(SetDescriptor::box(vec({1.0}), vec({0.0})), InvalidArgument);
}

TEST_CASE("ball, orthant and translation") {
  const auto ball = SetDescriptor::ball(vec({1.0, 1.0}), 1.0);
  CHECK(distance_exact(ball, 0.0, vec({4.0, 5.0})) == doctest::Approx(4.0));
  const auto orth = SetDescriptor::nonnegative_orthant();
  CHECK(distance_exact(orth, 0.0, vec({-3.0, 2.0, -4.0})) == doctest::Approx(5.0));

  const auto moving = SetDescriptor::translating(
      SetDescriptor::halfspace(vec({1.0}), 0.0), vec({2.0}));
  CHECK(moving.lipschitz_const() == doctest::Approx(2.0));
  CHECK(project_exact(moving, 0.75, vec({0.0}))(0) == doctest::Approx(1.5));
  CHECK_THROWS_AS(SetDescriptor::translating(SetDescriptor::halfspace(vec({1.0}), 0.0),
                                             vec({2.0}), 1.0),
                  InvalidArgument);
}

TEST_CASE("closed-form distances agree with the oracle on random points") {
  oracle::Gen g(11);
  for (int trial = 0; trial < 200; ++trial) {
    const Eigen::Index d = g.integer(1, 4);
    const Vector x = g.vec(d, 3.0);
    const Vector a = g.vec(d);
    const double beta = g.normal();
    CHECK(distance_exact(SetDescriptor::halfspace(a, beta), 0.0, x) ==
          doctest::Approx(oracle::dist_halfspace(a, beta, x)));
    const Vector lo = g.vec(d);
    const Vector hi = lo + g.vec(d).cwiseAbs();
    CHECK(distance_exact(SetDescriptor::box(lo, hi), 0.0, x) ==
          doctest::Approx(oracle::dist_box(lo, hi, x)));
    const double r = g.uniform(0.1, 2.0);
    CHECK(distance_exact(SetDescriptor::ball(a, r), 0.0, x) ==
          doctest::Approx(oracle::dist_ball(a, r, x)));
    CHECK(distance_exact(SetDescriptor::nonnegative_orthant(), 0.0, x) ==
          doctest::Approx(oracle::dist_orthant(x)));
  }
}

TEST_CASE("projection is idempotent and nonexpansive") {
  oracle::Gen g(12);
  const auto s = SetDescriptor::ball(vec({0.5, -0.5, 0.0}), 1.3);
  for (int trial = 0; trial < 100; ++trial) {
    const Vector x = g.vec(3, 3.0), y = g.vec(3, 3.0);
    const Point px = project_exact(s, 0.0, x), py = project_exact(s, 0.0, y);
    CHECK((project_exact(s, 0.0, px) - px).norm() <= 1e-12);
    CHECK((px - py).norm() <= (x - y).norm() + 1e-12);
  }
}

TEST_CASE("eps_eta_project rejects nonpositive tolerances") {
  const auto s = SetDescriptor::nonnegative_orthant();
  CHECK_THROWS_AS(eps_eta_project(s, 0.0, vec({1.0}), 0.0, 1e-3), InvalidArgument);
  CHECK_THROWS_AS(eps_eta_project(s, 0.0, vec({1.0}), 1e-3, -1.0), InvalidArgument);
}

TEST_CASE("exact provider returns a tight valid certificate") {
  const auto s = SetDescriptor::box(vec({0.0, 0.0}), vec({1.0, 1.0}));
  const auto r = eps_eta_project(s, 0.0, vec({2.0, -1.0}), 1e-6, 1e-6);
  CHECK(r.certificate.valid());
  CHECK(r.certificate.value_gap == 0.0);
  CHECK(r.certificate.method == ProjectionMethod::Exact);
  CHECK((r.point - vec({1.0, 0.0})).norm() == 0.0);
}

TEST_CASE("outside_lagging answers from outside the set within eta") {
  const auto base = SetDescriptor::halfspace(vec({1.0}), 0.0);
  const auto lag = outside_lagging(base, 0.9);
  CHECK_FALSE(lag.is_closed_form());
  const auto r = eps_eta_project(lag, 0.0, vec({-1.0}), 1e-4, 1e-2);
  CHECK(r.point(0) == doctest::Approx(-0.009));
  CHECK(r.certificate.valid());
  CHECK(r.certificate.enlargement_residual == doctest::Approx(0.009));
  // Points closer than the lag are returned unchanged.
  CHECK(eps_eta_project(lag, 0.0, vec({-0.001}), 1e-4, 1e-2).point(0) ==
        doctest::Approx(-0.001));
  CHECK_THROWS_AS(outside_lagging(base, 1.0), InvalidArgument);
}

TEST_CASE("custom provider is re-certified against its distance oracle") {
  CustomSet cs;
  cs.distance = [](double, const Point& x) {
    const double d = std::max(0.0, -x(0));
    return DistanceEstimate{d, d};
  };
  // Claims a perfect certificate but returns x itself.
  cs.project = [](double, const Point& x, double eps, double eta) {
    ProjectionCertificate c;
    c.epsilon = eps;
    c.eta = eta;
    return CustomProjection{x, c};
  };
  const auto s = SetDescriptor::custom(cs, 0.0);
  CHECK_NOTHROW(eps_eta_project(s, 0.0, vec({-1e-4}), 1e-6, 1e-3));
  try {
    eps_eta_project(s, 0.0, vec({-1.0}), 1e-6, 1e-3);
    FAIL("expected CertificateFailure");
  } catch (const CertificateFailure& e) {
    CHECK(e.best().enlargement_residual == doctest::Approx(1.0));
    CHECK_FALSE(e.best().valid());
  }
}

TEST_CASE("certify_candidate measures gap and residual") {
  const auto s = SetDescriptor::nonnegative_orthant();
  const auto c = certify_candidate(s, 0.0, vec({-1.0, 1.0}), vec({0.1, 1.0}), 0.05, 0.05);
  CHECK(c.value_gap == doctest::Approx(0.21));
  CHECK(c.enlargement_residual == 0.0);
  CHECK_FALSE(c.valid());
}

TEST_CASE("polyhedron distance bounds bracket the oracle distance") {
  oracle::Gen g(13);
  for (int trial = 0; trial < 60; ++trial) {
    const Eigen::Index n = g.integer(1, 4), m = g.integer(1, 6);
    const Matrix P = g.spd(n), C = g.mat(m, n);
    const Vector y0 = g.vec(n);
    const Vector F = -C * y0 + g.vec(m).cwiseAbs();
    auto poly = std::make_shared<const MetricPolyhedron>(P, C, Matrix(), F, Signal());
    const auto s = SetDescriptor::metric_polyhedron(poly);
    const Point x = g.vec(n, 3.0);
    const auto est = distance_bounds(s, 0.0, x);
    const double d = oracle::project_polyhedron(P, C, F, x).distance;
    CHECK(est.lower <= d + 1e-9);
    CHECK(est.upper >= d - 1e-9);
  }
}

}
