#pragma once

// eps-eta approximate projections onto S(t) = R K(t), where
// K(t) = {y : C y + G u(t) + F >= 0} and R = sqrt(P), via projected gradient
// on the dual quadratic program.

#include <cstddef>

#include "sweep/set_model.hpp"
#include "sweep/signal.hpp"
#include "sweep/types.hpp"

namespace sweep {

/// Immutable polyhedral family with its metric. Everything that does not
/// depend on (t, x) is computed once at construction.
class MetricPolyhedron {
 public:
  /// P must be symmetric positive definite; R is its spectral square root.
  /// Throws InvalidArgument on inconsistent dimensions, SingularMetric or
  /// NotPositiveDefinite on a bad P.
  MetricPolyhedron(Matrix P, Matrix C, Matrix G, Vector F, Signal u);

  std::size_t state_dim() const { return static_cast<std::size_t>(P_.rows()); }
  std::size_t constraint_count() const {
    return static_cast<std::size_t>(C_.rows());
  }

  const Matrix& P() const { return P_; }
  const Matrix& R() const { return R_; }
  const Matrix& R_inv() const { return R_inv_; }
  const Matrix& C() const { return C_; }
  const Matrix& G() const { return G_; }
  const Vector& F() const { return F_; }
  const Signal& u() const { return u_; }
  /// B = P^{-1} C^T
  const Matrix& B() const { return B_; }
  /// H = C B = C P^{-1} C^T
  const Matrix& H() const { return H_; }
  /// Step length denominator: lambda_max(H), or ||H||_F if power iteration
  /// did not converge.
  double step_bound() const { return step_bound_; }
  double R_norm() const { return R_norm_; }
  /// Hoffman-type constant: d_K(y) <= hoffman() * ||[-(C y + b)]_+||.
  double hoffman() const { return hoffman_; }

  /// b(t) = G u(t) + F
  Vector offset(double t) const;
  /// ||[-(C y + b(t))]_+||_2
  double violation(double t, const Vector& y) const;
  /// Upper bound on d_{S(t)}(z) through the Hoffman constant.
  double distance_upper_bound(double t, const Point& z) const;

 private:
  Matrix P_, R_, R_inv_, C_, G_;
  Vector F_;
  Signal u_;
  Matrix B_, H_;
  double step_bound_ = 1.0;
  double R_norm_ = 1.0;
  double hoffman_ = 0.0;
};

/// Dual of min_{y in K(t)} ||x - R y||^2 written as
/// max_{lambda >= 0} -lambda^T H lambda - 2 q^T lambda (+ constants).
struct DualProblem {
  Matrix H;
  Vector q;
  double lambda_max = 1.0;
};

struct StoppingRule {
  double epsilon = 1e-6;
  double eta = 1e-6;
  std::size_t max_iters = 200000;
  std::size_t check_every = 5;
};

struct SpectralBound {
  double value = 0.0;
  bool converged = false;
  std::size_t iterations = 0;
};

/// Largest eigenvalue of a symmetric PSD matrix by power iteration. Stops when
/// ||H v - rho v|| <= rel_tol * rho. If the cap (default 10 m) is hit the
/// Frobenius norm is returned instead, which is still an upper bound.
/// Throws ZeroMatrix when H = 0.
SpectralBound max_eigenvalue(const Matrix& H, double rel_tol = 1e-9,
                             std::size_t max_iters = 0);

DualProblem assemble_dual(const MetricPolyhedron& poly, double t,
                          const Point& x);

/// y = B lambda + R^{-1} x
Point primal_recover(const MetricPolyhedron& poly, const Vector& lambda,
                     const Point& x);

/// -lambda^T H lambda - 2 q^T lambda. This is the dual objective shifted by
/// ||x||^2 and therefore a lower bound on d_{S(t)}(x)^2 for every lambda >= 0.
double dual_lower_bound(const DualProblem& dual, const Vector& lambda);

ProjectionCertificate certify_projection(const MetricPolyhedron& poly,
                                         double t, const Point& x,
                                         const Vector& lambda);

/// Same, reusing an assembled dual.
ProjectionCertificate certify_projection(const MetricPolyhedron& poly,
                                         const DualProblem& dual, double t,
                                         const Point& x, const Vector& lambda);

struct DualSolution {
  Vector lambda;
  std::size_t iterations = 0;
  ProjectionCertificate certificate;
};

/// Iterates lambda_{k+1} = [lambda_k - (H lambda_k + q) / lambda_max]_+ from
/// lambda_0 = 0 (or *warm_start) until certify_projection is VALID for the
/// stopping rule. At each failed check the dual is also solved exactly on two
/// candidate faces (support of lambda, rows with C y + b <= 0); a face point
/// is returned only if its own certificate is VALID. Throws BudgetExhausted
/// with the best iterate otherwise.
DualSolution projected_gradient_solve(const MetricPolyhedron& poly, double t,
                                      const Point& x, const StoppingRule& stop,
                                      const Vector* warm_start = nullptr);

/// Bare iteration on an assembled dual with no certification: runs exactly
/// `iterations` steps and returns the final iterate.
Vector projected_gradient_steps(const DualProblem& dual, Vector lambda,
                                std::size_t iterations);

/// Smallest Hoffman-type constant computable from row subsets of C: 1/sigma_min
/// when C has full row rank, else the max of 1/sigma_min(C_J) over linearly
/// independent row subsets J (enumerated, m <= 20).
double hoffman_constant(const Matrix& C);

}  // namespace sweep
