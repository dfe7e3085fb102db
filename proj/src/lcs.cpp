#include "sweep/lcs.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/QR>

#include "sweep/errors.hpp"

namespace sweep {
namespace {

double min_eigenvalue(const Matrix& S) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(S, Eigen::EigenvaluesOnly);
  return eig.eigenvalues().minCoeff();
}

double metric_residual(const Matrix& P, const Matrix& B, const Matrix& C) {
  return (P * B - C.transpose()).norm();
}

double metric_tolerance(const Matrix& C) {
  return kMetricTolerance * std::max(1.0, C.norm());
}

Vector input_term(const Matrix& G, const Signal& u, double t) {
  if (G.cols() == 0) return Vector::Zero(G.rows());
  return G * u(t);
}

}  // namespace

void LCSystem::validate() const {
  const Eigen::Index n = A.rows();
  const Eigen::Index m = C.rows();
  const auto p = static_cast<Eigen::Index>(u.dim());
  auto fail = [](const std::string& what) {
    throw InvalidArgument("inconsistent LCS dimensions: " + what);
  };
  if (n == 0 || A.cols() != n) fail("A must be square and nonempty");
  if (B.rows() != n || B.cols() != m) fail("B must be n x m");
  if (C.cols() != n) fail("C must be m x n");
  if (F.size() != m) fail("F must have m entries");
  if (E.rows() != n || E.cols() != p) fail("E must be n x p with p = dim(u)");
  if (G.rows() != m || G.cols() != p) fail("G must be m x p with p = dim(u)");
  if (x0.size() != n) fail("x0 must have n entries");
  if (P && (P->rows() != n || P->cols() != n)) fail("P must be n x n");
}

Matrix solve_metric_P(const Matrix& B, const Matrix& C) {
  const Eigen::Index n = B.rows();
  const Eigen::Index m = B.cols();
  if (C.rows() != m || C.cols() != n) {
    throw InvalidArgument("solve_metric_P: C must be the transpose shape of B");
  }

  // Unknowns are the upper triangle of P, off-diagonals scaled by sqrt(2) so
  // that the Euclidean norm of the unknown vector equals ||P||_F.
  const double r2 = std::sqrt(2.0);
  const Eigen::Index N = n * (n + 1) / 2;
  Matrix M = Matrix::Zero(n * m, N);
  Vector rhs(n * m);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index k = 0; k < m; ++k) rhs(i * m + k) = C(k, i);
  }
  Eigen::Index col = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j, ++col) {
      for (Eigen::Index k = 0; k < m; ++k) {
        if (i == j) {
          M(i * m + k, col) += B(i, k);
        } else {
          M(i * m + k, col) += B(j, k) / r2;
          M(j * m + k, col) += B(i, k) / r2;
        }
      }
    }
  }
  auto unpack = [&](const Vector& s) {
    Matrix P(n, n);
    Eigen::Index c = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = i; j < n; ++j, ++c) {
        P(i, j) = P(j, i) = i == j ? s(c) : s(c) / r2;
      }
    }
    return P;
  };

  Eigen::CompleteOrthogonalDecomposition<Matrix> cod(M);
  const double tol = metric_tolerance(C);
  double best_residual = std::numeric_limits<double>::infinity();
  double best_min_eig = -std::numeric_limits<double>::infinity();

  for (double alpha : std::array{1.0, 10.0, 0.1, 100.0, 0.01, 1e3, 1e-3}) {
    Vector anchor = Vector::Zero(N);
    Eigen::Index c = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = i; j < n; ++j, ++c) {
        if (i == j) anchor(c) = alpha;
      }
    }
    // Closest point to alpha I in the affine solution set.
    const Vector s = anchor + cod.solve(rhs - M * anchor);
    const Matrix P = unpack(s);
    const double residual = metric_residual(P, B, C);
    const double lo = min_eigenvalue(P);
    best_residual = std::min(best_residual, residual);
    best_min_eig = std::max(best_min_eig, lo);
    if (residual > tol) break;  // inconsistent system: no alpha will help
    if (lo > 0.0 && Eigen::LLT<Matrix>(P).info() == Eigen::Success) return P;
  }
  throw NoMetricExists("no symmetric positive definite P with P B = C^T (residual " +
                           std::to_string(best_residual) + ", smallest eigenvalue " +
                           std::to_string(best_min_eig) + ")",
                       best_residual, best_min_eig);
}

void verify_metric_P(const Matrix& P, const Matrix& B, const Matrix& C) {
  if (P.rows() != B.rows() || P.cols() != B.rows() || C.rows() != B.cols() ||
      C.cols() != B.rows()) {
    throw InvalidArgument("verify_metric_P: inconsistent dimensions");
  }
  const double residual = metric_residual(P, B, C);
  const double asym = (P - P.transpose()).norm();
  const double lo = min_eigenvalue(0.5 * (P + P.transpose()));
  if (asym > 1e-12 * std::max(1.0, P.norm()) || residual > metric_tolerance(C) ||
      !(lo > 0.0)) {
    throw NoMetricExists("supplied P fails P = P^T, P B = C^T or P > 0 (residual " +
                             std::to_string(residual) + ", smallest eigenvalue " +
                             std::to_string(lo) + ")",
                         residual, lo);
  }
}

Matrix matrix_sqrt_pd(const Matrix& P) {
  if (P.rows() != P.cols() || P.rows() == 0) {
    throw InvalidArgument("matrix_sqrt_pd needs a nonempty square matrix");
  }
  if ((P - P.transpose()).norm() > 1e-12 * std::max(1.0, P.norm())) {
    throw NotPositiveDefinite("matrix_sqrt_pd: matrix is not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (P + P.transpose()));
  if (!(eig.eigenvalues().minCoeff() > 0.0)) {
    throw NotPositiveDefinite("matrix_sqrt_pd: smallest eigenvalue " +
                              std::to_string(eig.eigenvalues().minCoeff()));
  }
  Matrix R = eig.eigenvectors() * eig.eigenvalues().cwiseSqrt().asDiagonal() *
             eig.eigenvectors().transpose();
  return 0.5 * (R + R.transpose());
}

SweepingReformulation lcs_to_sweeping(const LCSystem& sys, double gamma) {
  sys.validate();
  if (!(gamma > 0.0)) throw InvalidArgument("gamma must be positive");
  if (!sys.u.continuous() && !sys.discontinuous_input) {
    throw InvalidArgument(
        "input signal is discontinuous; set discontinuous_input to run anyway");
  }

  Matrix P;
  if (sys.P) {
    verify_metric_P(*sys.P, sys.B, sys.C);
    P = 0.5 * (*sys.P + sys.P->transpose());
  } else {
    P = solve_metric_P(sys.B, sys.C);
  }

  const Vector w0 = sys.C * sys.x0 + input_term(sys.G, sys.u, 0.0) + sys.F;
  const double slack = w0.size() == 0 ? 0.0 : w0.minCoeff();
  if (slack < -1e-9 * (1.0 + w0.cwiseAbs().maxCoeff())) {
    throw InfeasibleInitial("C x0 + G u(0) + F has a component of " +
                            std::to_string(slack));
  }

  auto poly = std::make_shared<const MetricPolyhedron>(P, sys.C, sys.G, sys.F,
                                                       sys.u);
  const Matrix& R = poly->R();
  const Matrix& R_inv = poly->R_inv();
  Matrix drift = R * sys.A * R_inv;
  Matrix input = R * sys.E;

  const double lh = spectral_norm(drift);
  const double input_bound = spectral_norm(input) * sys.u.sup_norm();

  Perturbation pert;
  pert.gamma = gamma;
  pert.lipschitz_h = lh;
  pert.h = [lh, input_bound](const Point& z) { return lh * z.norm() + input_bound; };
  if (input.cols() == 0) {
    pert.f = [drift](double, const Point& z) -> Vector { return drift * z; };
  } else {
    pert.f = [drift, input, u = sys.u](double t, const Point& z) -> Vector {
      return drift * z + input * u(t);
    };
  }

  SetDescriptor set = SetDescriptor::metric_polyhedron(poly);
  const bool theory = std::isfinite(set.lipschitz_const());
  return SweepingReformulation{
      .P = P,
      .R = R,
      .R_inv = R_inv,
      .drift_matrix = std::move(drift),
      .input_matrix = std::move(input),
      .poly = poly,
      .set = std::move(set),
      .perturbation = std::move(pert),
      .z0 = R * sys.x0,
      .theory_applies = theory,
  };
}

OriginalSolution recover_original(const SweepingReformulation& reform,
                                  const Trajectory& traj) {
  OriginalSolution out;
  const auto m = static_cast<Eigen::Index>(reform.poly->constraint_count());
  out.x_nodes.reserve(traj.nodes.size());
  out.zeta_nodes.reserve(traj.nodes.size());
  for (const Point& z : traj.nodes) out.x_nodes.push_back(reform.R_inv * z);
  out.zeta_nodes.push_back(Vector::Zero(m));
  for (const Vector& lambda : traj.multipliers) {
    out.zeta_nodes.push_back(lambda.size() == m ? Vector(lambda / traj.schedule.mu)
                                                : Vector(Vector::Zero(m)));
  }
  return out;
}

double complementarity_residual(const LCSystem& sys, const Point& x,
                                const Vector& zeta, double t) {
  const Vector w = sys.C * x + input_term(sys.G, sys.u, t) + sys.F;
  if (zeta.size() != w.size()) {
    throw InvalidArgument("zeta must have one entry per constraint");
  }
  double r = 0.0;
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    r = std::max({r, std::abs(std::min(zeta(i), w(i))), std::max(0.0, -w(i))});
  }
  return r;
}

}  // namespace sweep
