#include "sweep/dual_qp.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <limits>
#include <vector>
#include <cmath>
#include <memory>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/QR>
#include <Eigen/SVD>

#include "sweep/errors.hpp"
#include "sweep/lcs.hpp"

namespace sweep {
namespace {

std::string dims(const Matrix& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

// Maximizes the dual over lambda supported on `rows` (equality-constrained, no
// sign constraint), then clips to lambda >= 0. Degenerate duals can leave the
// plain iteration crawling along a flat valley; the exact face solve jumps to
// its end once the active rows have been identified.
Vector face_solve(const DualProblem& dual, const std::vector<Eigen::Index>& rows) {
  const auto k = static_cast<Eigen::Index>(rows.size());
  Matrix HJ(k, k);
  Vector qJ(k);
  for (Eigen::Index a = 0; a < k; ++a) {
    qJ(a) = dual.q(rows[a]);
    for (Eigen::Index b = 0; b < k; ++b) HJ(a, b) = dual.H(rows[a], rows[b]);
  }
  const Vector lJ = Eigen::CompleteOrthogonalDecomposition<Matrix>(HJ).solve(-qJ);
  Vector lambda = Vector::Zero(dual.q.size());
  for (Eigen::Index a = 0; a < k; ++a) lambda(rows[a]) = std::max(0.0, lJ(a));
  return lambda;
}

}  // namespace

MetricPolyhedron::MetricPolyhedron(Matrix P, Matrix C, Matrix G, Vector F,
                                   Signal u)
    : P_(std::move(P)),
      C_(std::move(C)),
      G_(std::move(G)),
      F_(std::move(F)),
      u_(std::move(u)) {
  const Eigen::Index n = P_.rows();
  const Eigen::Index m = C_.rows();
  if (n == 0 || P_.cols() != n) {
    throw InvalidArgument("metric P must be square and nonempty, got " + dims(P_));
  }
  if (C_.cols() != n) {
    throw InvalidArgument("C must have " + std::to_string(n) + " columns, got " +
                          dims(C_));
  }
  if (F_.size() != m) {
    throw InvalidArgument("F must have " + std::to_string(m) + " entries");
  }
  const auto p = static_cast<Eigen::Index>(u_.dim());
  if (G_.size() == 0 && p == 0) G_.resize(m, 0);
  if (G_.rows() != m || G_.cols() != p) {
    throw InvalidArgument("G must be " + std::to_string(m) + "x" +
                          std::to_string(p) + " to match C and u, got " + dims(G_));
  }
  if (!P_.allFinite() || !C_.allFinite() || !G_.allFinite() || !F_.allFinite()) {
    throw InvalidArgument("polyhedron data must be finite");
  }

  const double p_norm = P_.norm();
  if ((P_ - P_.transpose()).norm() > 1e-12 * p_norm) {
    throw InvalidArgument("metric P must be symmetric");
  }
  P_ = 0.5 * (P_ + P_.transpose());

  Eigen::SelfAdjointEigenSolver<Matrix> eig(P_);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  if (!(lo > 0.0)) {
    throw NotPositiveDefinite("metric P is not positive definite (min eigenvalue " +
                              std::to_string(lo) + ")");
  }
  if (lo < 1e-14 * hi) {
    throw SingularMetric("metric P is numerically singular (condition number " +
                         std::to_string(hi / lo) + ")");
  }

  R_ = matrix_sqrt_pd(P_);
  const Vector inv_sqrt = eig.eigenvalues().cwiseSqrt().cwiseInverse();
  R_inv_ = eig.eigenvectors() * inv_sqrt.asDiagonal() *
           eig.eigenvectors().transpose();
  R_inv_ = 0.5 * (R_inv_ + R_inv_.transpose());
  R_norm_ = std::sqrt(hi);

  Eigen::LLT<Matrix> llt(P_);
  B_ = llt.solve(C_.transpose());
  H_ = C_ * B_;
  H_ = 0.5 * (H_ + H_.transpose());

  if (m > 0 && H_.norm() > 0.0) {
    step_bound_ = max_eigenvalue(H_).value;
    hoffman_ = hoffman_constant(C_);
  }
}

Vector MetricPolyhedron::offset(double t) const {
  if (G_.cols() == 0) return F_;
  return G_ * u_(t) + F_;
}

double MetricPolyhedron::violation(double t, const Vector& y) const {
  if (C_.rows() == 0) return 0.0;
  return (-(C_ * y + offset(t))).cwiseMax(0.0).norm();
}

double MetricPolyhedron::distance_upper_bound(double t, const Point& z) const {
  const double v = violation(t, R_inv_ * z);
  return v == 0.0 ? 0.0 : R_norm_ * hoffman_ * v;
}

SpectralBound max_eigenvalue(const Matrix& H, double rel_tol,
                             std::size_t max_iters) {
  const double frob = H.norm();
  if (frob == 0.0) throw ZeroMatrix("max_eigenvalue of the zero matrix");
  const Eigen::Index m = H.rows();
  const std::size_t cap = max_iters > 0 ? max_iters : 10 * static_cast<std::size_t>(m);

  Vector v(m);
  for (Eigen::Index i = 0; i < m; ++i) v(i) = 1.0 + 0.1 * std::sqrt(double(i + 1));
  v.normalize();

  for (std::size_t k = 1; k <= cap; ++k) {
    const Vector w = H * v;
    const double rho = v.dot(w);
    const double wn = w.norm();
    if (wn == 0.0) break;
    // lambda_max >= ||H||_F / sqrt(m); anything below is a lesser eigenvalue.
    if ((w - rho * v).norm() <= rel_tol * rho &&
        rho >= frob / std::sqrt(double(m)) * (1.0 - 1e-12)) {
      return {rho, true, k};
    }
    v = w / wn;
  }
  return {frob, false, cap};
}

DualProblem assemble_dual(const MetricPolyhedron& poly, double t,
                          const Point& x) {
  if (static_cast<std::size_t>(x.size()) != poly.state_dim()) {
    throw InvalidArgument("point dimension does not match the polyhedron");
  }
  DualProblem dual;
  dual.H = poly.H();
  dual.q = poly.B().transpose() * (poly.R() * x) + poly.offset(t);
  dual.lambda_max = poly.step_bound();
  return dual;
}

Point primal_recover(const MetricPolyhedron& poly, const Vector& lambda,
                     const Point& x) {
  if (lambda.size() == 0) return poly.R_inv() * x;
  return poly.B() * lambda + poly.R_inv() * x;
}

double dual_lower_bound(const DualProblem& dual, const Vector& lambda) {
  if (lambda.size() == 0) return 0.0;
  return -lambda.dot(dual.H * lambda) - 2.0 * dual.q.dot(lambda);
}

ProjectionCertificate certify_projection(const MetricPolyhedron& poly,
                                         const DualProblem& dual, double t,
                                         const Point& x, const Vector& lambda) {
  const Point y = primal_recover(poly, lambda, x);
  const Point z = poly.R() * y;
  ProjectionCertificate cert;
  cert.method = ProjectionMethod::DualProjectedGradient;
  cert.value_gap = (x - z).squaredNorm() - dual_lower_bound(dual, lambda);
  const double v = poly.violation(t, y);
  cert.enlargement_residual = v == 0.0 ? 0.0 : poly.R_norm() * poly.hoffman() * v;
  return cert;
}

ProjectionCertificate certify_projection(const MetricPolyhedron& poly,
                                         double t, const Point& x,
                                         const Vector& lambda) {
  return certify_projection(poly, assemble_dual(poly, t, x), t, x, lambda);
}

Vector projected_gradient_steps(const DualProblem& dual, Vector lambda,
                                std::size_t iterations) {
  const double step = 1.0 / dual.lambda_max;
  for (std::size_t k = 0; k < iterations; ++k) {
    lambda = (lambda - step * (dual.H * lambda + dual.q)).cwiseMax(0.0);
  }
  return lambda;
}

DualSolution projected_gradient_solve(const MetricPolyhedron& poly, double t,
                                      const Point& x, const StoppingRule& stop,
                                      const Vector* warm_start) {
  if (stop.max_iters < 1) throw InvalidArgument("max_iters must be at least 1");
  const std::size_t check_every = std::max<std::size_t>(stop.check_every, 1);
  const DualProblem dual = assemble_dual(poly, t, x);
  const Eigen::Index m = dual.q.size();

  auto stamp = [&](ProjectionCertificate cert, std::size_t k) {
    cert.epsilon = stop.epsilon;
    cert.eta = stop.eta;
    cert.iterations = k;
    return cert;
  };

  Vector lambda = Vector::Zero(m);
  if (warm_start != nullptr && warm_start->size() == m) {
    lambda = warm_start->cwiseMax(0.0);
  }
  if (m == 0) {
    return {lambda, 0, stamp(certify_projection(poly, dual, t, x, lambda), 0)};
  }

  const double step = 1.0 / dual.lambda_max;
  ProjectionCertificate best;
  Vector best_lambda = lambda;
  double best_score = std::numeric_limits<double>::infinity();

  for (std::size_t k = 1; k <= stop.max_iters; ++k) {
    lambda = (lambda - step * (dual.H * lambda + dual.q)).cwiseMax(0.0);
    if (k == 1 || k % check_every == 0 || k == stop.max_iters) {
      const ProjectionCertificate cert =
          stamp(certify_projection(poly, dual, t, x, lambda), k);
      if (cert.valid()) return {lambda, k, cert};
      double score = cert.violation_ratio();
      if (score < best_score) {
        best_score = score;
        best = cert;
        best_lambda = lambda;
      }

      // Try the faces suggested by the multiplier support and by the rows
      // the current primal point violates or touches.
      const Vector w = dual.H * lambda + dual.q;  // = C y + b
      std::vector<Eigen::Index> support, touching;
      for (Eigen::Index i = 0; i < m; ++i) {
        if (lambda(i) > 0.0) support.push_back(i);
        if (w(i) <= 0.0) touching.push_back(i);
      }
      for (const auto* rows : {&support, &touching}) {
        if (rows->empty() || (rows == &touching && touching == support)) continue;
        const Vector polished = face_solve(dual, *rows);
        const ProjectionCertificate pc =
            stamp(certify_projection(poly, dual, t, x, polished), k);
        if (pc.valid()) return {polished, k, pc};
        score = pc.violation_ratio();
        if (score < best_score) {
          best_score = score;
          best = pc;
          best_lambda = polished;
        }
      }
    }
  }
  throw BudgetExhausted(
      "dual projected gradient exhausted " + std::to_string(stop.max_iters) +
          " iterations (best gap " + std::to_string(best.value_gap) +
          ", residual " + std::to_string(best.enlargement_residual) + ")",
      std::make_shared<const ProjectionCertificate>(best), best_lambda);
}

double hoffman_constant(const Matrix& C) {
  std::vector<Eigen::Index> rows;
  for (Eigen::Index i = 0; i < C.rows(); ++i) {
    if (C.row(i).norm() > 0.0) rows.push_back(i);
  }
  if (rows.empty()) return 0.0;
  const double scale = C.norm();
  const double tol = 1e-10 * scale;

  auto sigma_min = [](const Matrix& sub) {
    Eigen::JacobiSVD<Matrix> svd(sub);
    const auto& s = svd.singularValues();
    return s.size() < sub.rows() ? 0.0 : s(s.size() - 1);
  };

  Matrix nonzero(static_cast<Eigen::Index>(rows.size()), C.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    nonzero.row(static_cast<Eigen::Index>(i)) = C.row(rows[i]);
  }
  // Row deletion can only raise the smallest singular value of a full-row-rank
  // matrix, so the whole matrix dominates every subset.
  const double full = sigma_min(nonzero);
  if (full > tol) return 1.0 / full;

  const std::size_t m = rows.size();
  if (m > 20) {
    throw InvalidArgument(
        "Hoffman constant for rank-deficient C is enumerated over row subsets "
        "and limited to 20 nonzero rows");
  }
  const auto rank = Eigen::JacobiSVD<Matrix>(nonzero).setThreshold(1e-10).rank();
  double worst = 0.0;
  for (std::uint32_t mask = 1; mask < (1u << m); ++mask) {
    const int count = std::popcount(mask);
    if (count > rank) continue;
    Matrix sub(count, C.cols());
    Eigen::Index r = 0;
    for (std::size_t i = 0; i < m; ++i) {
      if (mask & (1u << i)) sub.row(r++) = nonzero.row(static_cast<Eigen::Index>(i));
    }
    const double s = sigma_min(sub);
    if (s > tol) worst = std::max(worst, 1.0 / s);
  }
  return worst;
}

}  // namespace sweep
