#include "doctest.h"

#include <cmath>
#include <memory>

#include "oracle/oracle.hpp"
#include "sweep/dual_qp.hpp"
#include "sweep/errors.hpp"

using namespace sweep;

namespace {

struct RandomPoly {
  Matrix P, C;
  Vector F;
  std::shared_ptr<const MetricPolyhedron> poly;
};

RandomPoly random_poly(oracle::Gen& g, Eigen::Index n, Eigen::Index m) {
  RandomPoly r;
  r.P = g.spd(n);
  r.C = g.mat(m, n);
  Vector slack = g.vec(m).cwiseAbs();
  for (Eigen::Index i = 0; i < m; ++i) {
    if (g.coin(0.3)) slack(i) = 0.0;
  }
  r.F = -r.C * g.vec(n) + slack;
  r.poly = std::make_shared<const MetricPolyhedron>(r.P, r.C, Matrix(), r.F, Signal());
  return r;
}

}  // namespace

TEST_SUITE("dual_qp") {

TEST_CASE("power iteration on a 2x2 example") {
  Matrix H(2, 2);
  H << 1.5, 0.5, 0.5, 0.5;
  const auto b = max_eigenvalue(H);
  CHECK(b.converged);
  CHECK(b.value == doctest::Approx(1.0 + std::sqrt(2.0) / 2.0).epsilon(1e-9));
}

TEST_CASE("power iteration edge cases") {
  CHECK_THROWS_AS(max_eigenvalue(Matrix::Zero(3, 3)), ZeroMatrix);
  Matrix one(1, 1);
  one << 4.0;
  CHECK(max_eigenvalue(one).value == doctest::Approx(4.0));
  // Repeated top eigenvalue.
  CHECK(max_eigenvalue(Matrix::Identity(4, 4) * 2.0).value == doctest::Approx(2.0));
  // A cap too small to converge falls back to the Frobenius norm.
  Matrix H(3, 3);
  H << 3, 1, 0, 1, 2.9, 1, 0, 1, 2.8;
  const auto capped = max_eigenvalue(H, 1e-15, 1);
  CHECK_FALSE(capped.converged);
  CHECK(capped.value == doctest::Approx(H.norm()));
}

TEST_CASE("power iteration never undershoots the largest eigenvalue by more than tolerance") {
  oracle::Gen g(21);
  for (int trial = 0; trial < 200; ++trial) {
    const Eigen::Index m = g.integer(1, 8);
    const Matrix A = g.mat(m, g.integer(1, 5));
    const Matrix H = A * A.transpose();
    if (H.norm() == 0.0) continue;
    const double truth =
        Eigen::SelfAdjointEigenSolver<Matrix>(H).eigenvalues().maxCoeff();
    const auto b = max_eigenvalue(H);
    CHECK(b.value >= truth * (1.0 - 1e-6));
    if (b.converged) CHECK(b.value <= truth * (1.0 + 1e-9));
  }
}

TEST_CASE("metric polyhedron construction") {
  Matrix P(2, 2), C(1, 2);
  P << 2, 0, 0, 8;
  C << 1, 1;
  const MetricPolyhedron poly(P, C, Matrix(), Vector::Zero(1), Signal());
  CHECK((poly.R() * poly.R() - P).norm() < 1e-12);
  CHECK((poly.R() * poly.R_inv() - Matrix::Identity(2, 2)).norm() < 1e-12);
  CHECK((P * poly.B() - C.transpose()).norm() < 1e-12);
  CHECK(poly.H()(0, 0) == doctest::Approx(0.5 + 0.125));
  CHECK(poly.hoffman() == doctest::Approx(1.0 / std::sqrt(2.0)));

  Matrix bad(2, 2);
  bad << 1, 0, 0, -1;
  CHECK_THROWS_AS(MetricPolyhedron(bad, C, Matrix(), Vector::Zero(1), Signal()),
                  NotPositiveDefinite);
  Matrix tiny(2, 2);
  tiny << 1, 0, 0, 1e-16;
  CHECK_THROWS_AS(MetricPolyhedron(tiny, C, Matrix(), Vector::Zero(1), Signal()),
                  SingularMetric);
  CHECK_THROWS_AS(MetricPolyhedron(P, C, Matrix(), Vector::Zero(2), Signal()),
                  InvalidArgument);
}

TEST_CASE("hoffman constant covers rank-deficient constraint matrices") {
  // Two parallel rows of different length: the short one dominates.
  Matrix C(2, 2);
  C << 1, 0, 0.25, 0;
  CHECK(hoffman_constant(C) == doctest::Approx(4.0));
  // Full row rank uses the whole matrix.
  CHECK(hoffman_constant(Matrix::Identity(3, 3)) == doctest::Approx(1.0));
  CHECK(hoffman_constant(Matrix::Zero(2, 3)) == 0.0);
}

TEST_CASE("hoffman bound is a sound distance upper bound") {
  oracle::Gen g(22);
  for (int trial = 0; trial < 150; ++trial) {
    auto r = random_poly(g, g.integer(1, 4), g.integer(1, 7));
    const Point z = g.vec(r.P.rows(), 2.0);
    const double d = oracle::project_polyhedron(r.P, r.C, r.F, z).distance;
    CHECK(r.poly->distance_upper_bound(0.0, z) >= d * (1.0 - 1e-9) - 1e-12);
  }
}

TEST_CASE("weak duality: the dual bound never exceeds the squared distance") {
  oracle::Gen g(23);
  for (int trial = 0; trial < 200; ++trial) {
    auto r = random_poly(g, g.integer(1, 5), g.integer(1, 8));
    const Point x = g.vec(r.P.rows(), 3.0);
    const DualProblem dual = assemble_dual(*r.poly, 0.0, x);
    const Vector lambda = g.vec(r.C.rows()).cwiseAbs() * g.uniform(0.0, 3.0);
    const double d = oracle::project_polyhedron(r.P, r.C, r.F, x).distance;
    CHECK(dual_lower_bound(dual, lambda) <= d * d + 1e-9 * (1.0 + d * d));
  }
}

TEST_CASE("projected gradient certifies and matches the oracle") {
  oracle::Gen g(24);
  for (int trial = 0; trial < 100; ++trial) {
    auto r = random_poly(g, g.integer(1, 5), g.integer(1, 8));
    const Point x = g.vec(r.P.rows(), 3.0);
    const StoppingRule stop{1e-8, 1e-6, 200000, 5};
    const DualSolution sol = projected_gradient_solve(*r.poly, 0.0, x, stop);
    CHECK(sol.certificate.valid());
    const Point z = r.poly->R() * primal_recover(*r.poly, sol.lambda, x);
    const auto ref = oracle::project_polyhedron(r.P, r.C, r.F, x);
    CHECK((x - z).squaredNorm() <= ref.distance * ref.distance + 1e-8 + 1e-12);
    CHECK(oracle::project_polyhedron(r.P, r.C, r.F, z).distance <= 1e-6 + 1e-12);
  }
}

TEST_CASE("interior points certify at the first check with zero multipliers") {
  Matrix C = Matrix::Identity(2, 2);
  const MetricPolyhedron poly(Matrix::Identity(2, 2), C, Matrix(), Vector::Zero(2),
                              Signal());
  const Point x = Vector::Ones(2);
  const auto sol = projected_gradient_solve(poly, 0.0, x, StoppingRule{1e-9, 1e-9});
  CHECK(sol.iterations == 1);
  CHECK(sol.lambda.norm() == 0.0);
}

TEST_CASE("budget exhaustion reports the best iterate") {
  oracle::Gen g(25);
  auto r = random_poly(g, 4, 8);
  const Point x = g.vec(4, 50.0);
  try {
    projected_gradient_solve(*r.poly, 0.0, x, StoppingRule{1e-30, 1e-30, 3, 1});
    FAIL("expected BudgetExhausted");
  } catch (const BudgetExhausted& e) {
    CHECK_FALSE(e.best().valid());
    CHECK(e.best_multipliers().size() == 8);
    CHECK(e.best().iterations >= 1);
  }
}

TEST_CASE("warm start from the solution certifies immediately") {
  oracle::Gen g(26);
  auto r = random_poly(g, 3, 5);
  const Point x = g.vec(3, 3.0);
  const StoppingRule stop{1e-8, 1e-8, 200000, 5};
  const auto cold = projected_gradient_solve(*r.poly, 0.0, x, stop);
  const auto warm = projected_gradient_solve(*r.poly, 0.0, x, stop, &cold.lambda);
  CHECK(warm.iterations <= cold.iterations);
  CHECK(warm.certificate.valid());
}

}
