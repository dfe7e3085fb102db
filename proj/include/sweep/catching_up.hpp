#pragma once

// Inexact catching-up scheme: uniform grid, drift integral, eps-eta projection
// step, and the piecewise interpolant between nodes.

#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

#include "sweep/set_model.hpp"
#include "sweep/types.hpp"

namespace sweep {

/// Uniform grid with tolerances (epsilon_n, eta_n). When generated from
/// exponents, epsilon_n = mu^eps_exponent and eta_n = mu^eta_exponent.
struct Schedule {
  std::size_t n = 1;
  double horizon = 1.0;
  double mu = 1.0;
  double epsilon = 1.0;
  double eta = 1.0;
  double eps_exponent = 0.0;
  double eta_exponent = 0.0;

  /// t_k = k T / n
  double node_time(std::size_t k) const;
};

/// Requires eps_exponent > 2 and eta_exponent > 1 so that epsilon_n / mu^2 and
/// eta_n / mu vanish under refinement. Throws InadmissibleExponents otherwise.
Schedule make_schedule(std::size_t n, double horizon, double eps_exponent,
                       double eta_exponent);

/// (delta_n(t), theta_n(t)): the grid cell [t_k, t_{k+1}) containing t, with
/// t = T mapped to (t_{n-1}, T). Throws OutOfRange outside [0, T].
std::pair<double, double> grid_delta_theta(const Schedule& schedule, double t);

/// Index k of the cell used by grid_delta_theta.
std::size_t grid_cell(const Schedule& schedule, double t);

/// Single-valued drift selection f with its growth bound
/// ||f(t, x)|| <= h(x) + sqrt(gamma), h Lipschitz with constant lipschitz_h.
struct Perturbation {
  std::function<Vector(double t, const Point& x)> f;
  std::function<double(const Point& x)> h;
  double lipschitz_h = 0.0;
  double gamma = 1e-6;

  /// Evaluates f and enforces the growth bound. Throws NonFiniteDrift or
  /// HypothesisViolation.
  Vector evaluate(double t, const Point& x) const;

  static Perturbation zero();
  /// f(t, x) = c
  static Perturbation constant(Vector c, double gamma = 1e-6);
};

/// Composite Simpson rule with `subintervals` panels of s -> f(s, x) over
/// [t_from, t_to]. Exact for integrands cubic in s on each panel.
Vector drift_integral(const Perturbation& p, const Point& x, double t_from,
                      double t_to, std::size_t subintervals = 8);

struct Trajectory {
  Schedule schedule;
  std::vector<double> grid;
  /// x_0 .. x_n
  std::vector<Point> nodes;
  /// I_k = int_{t_k}^{t_{k+1}} f(s, x_k) ds
  std::vector<Vector> drift_integrals;
  /// w_k = x_k + I_k, the point projected at step k
  std::vector<Point> pre_projection;
  std::vector<ProjectionCertificate> certificates;
  /// Dual multipliers per step when the provider exposes them (else empty).
  std::vector<Vector> multipliers;
  std::size_t quadrature_subintervals = 8;
  /// x_0 was outside C(0) by at most eta_n.
  bool initial_warning = false;

  std::size_t steps() const { return certificates.size(); }
  bool complete() const { return steps() == schedule.n; }
};

struct RunOptions {
  std::size_t quadrature_subintervals = 8;
  std::size_t max_proj_iters = 200000;
  std::size_t check_every = 5;
  /// Start each dual solve from the previous step's multipliers.
  bool warm_start = true;
};

/// x_{k+1} in proj^{eps_n, eta_n}_{C(t_{k+1})}(x_k + I_k) for k = 0..n-1.
/// Throws ProjectionFailure carrying the partial trajectory, InfeasibleInitial
/// when d_{C(0)}(x_0) > eta_n.
Trajectory catching_up_run(const SetDescriptor& set, const Perturbation& p,
                           const Point& x0, const Schedule& schedule,
                           const RunOptions& options = {});

/// The piecewise interpolant x_n(t) built from the nodes and drift integrals.
Point interpolate(const Trajectory& traj, const Perturbation& p, double t);

/// Time derivative of the interpolant inside the cell containing t:
/// (x_{k+1} - x_k - I_k) / mu + f(t, x_k).
Vector interpolant_derivative(const Trajectory& traj, const Perturbation& p,
                              double t);

}  // namespace sweep
