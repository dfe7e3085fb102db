#pragma once

// Linear complementarity systems with D = 0,
//   x' = A x + B zeta + E u,   0 <= zeta _|_ C x + G u + F >= 0,
// rewritten as perturbed sweeping processes in z = R x with R = sqrt(P),
// P B = C^T.

#include <memory>
#include <optional>
#include <vector>

#include "sweep/catching_up.hpp"
#include "sweep/dual_qp.hpp"
#include "sweep/set_model.hpp"
#include "sweep/signal.hpp"
#include "sweep/types.hpp"

namespace sweep {

struct LCSystem {
  Matrix A;  // n x n
  Matrix B;  // n x m
  Matrix C;  // m x n
  Matrix E;  // n x p
  Vector F;  // m
  Matrix G;  // m x p
  Signal u;
  Point x0;
  /// Set when u is allowed to jump; runs proceed but lie outside the theory.
  bool discontinuous_input = false;
  /// Metric supplied by the user; verified instead of solved for.
  std::optional<Matrix> P;

  /// Throws InvalidArgument on inconsistent dimensions.
  void validate() const;
};

struct SweepingReformulation {
  Matrix P, R, R_inv;
  /// R A R^{-1}
  Matrix drift_matrix;
  /// R E
  Matrix input_matrix;
  std::shared_ptr<const MetricPolyhedron> poly;
  SetDescriptor set;
  Perturbation perturbation;
  Point z0;
  bool theory_applies = true;
};

/// Symmetric P with P B = C^T. Among all symmetric solutions returns the one
/// closest to alpha I in Frobenius norm for the first alpha in 1, 10, 0.1, ...
/// that gives a positive definite P. Throws NoMetricExists.
Matrix solve_metric_P(const Matrix& B, const Matrix& C);

/// Checks a user-supplied P: symmetry, P B = C^T, positive definiteness.
void verify_metric_P(const Matrix& P, const Matrix& B, const Matrix& C);

/// ||P B - C^T||_F relative tolerance used by solve/verify.
inline constexpr double kMetricTolerance = 1e-9;

/// Spectral square root of a symmetric positive definite matrix.
/// Throws NotPositiveDefinite.
Matrix matrix_sqrt_pd(const Matrix& P);

/// Throws NoMetricExists, InfeasibleInitial.
SweepingReformulation lcs_to_sweeping(const LCSystem& sys, double gamma = 1e-6);

struct OriginalSolution {
  std::vector<Point> x_nodes;
  /// Discrete multiplier estimates lambda_k / mu. Node 0 carries zeros.
  std::vector<Vector> zeta_nodes;
};

OriginalSolution recover_original(const SweepingReformulation& reform,
                                  const Trajectory& traj);

/// max_i max(|min(zeta_i, w_i)|, max(0, -w_i)) with w = C x + G u(t) + F.
double complementarity_residual(const LCSystem& sys, const Point& x,
                                const Vector& zeta, double t);

}  // namespace sweep
