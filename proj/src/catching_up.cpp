#include "sweep/catching_up.hpp"

#include <cmath>
#include <memory>
#include <string>

#include "sweep/errors.hpp"

namespace sweep {

double Schedule::node_time(std::size_t k) const {
  if (k >= n) return horizon;
  return static_cast<double>(k) * horizon / static_cast<double>(n);
}

Schedule make_schedule(std::size_t n, double horizon, double eps_exponent,
                       double eta_exponent) {
  if (n < 1) throw InvalidArgument("schedule needs at least one step");
  if (!(horizon > 0.0) || !std::isfinite(horizon)) {
    throw InvalidArgument("horizon must be positive and finite");
  }
  if (!(eps_exponent > 2.0)) {
    throw InadmissibleExponents(
        "eps_exponent must be > 2 so that epsilon_n / mu_n^2 -> 0 (got " +
        std::to_string(eps_exponent) + ")");
  }
  if (!(eta_exponent > 1.0)) {
    throw InadmissibleExponents(
        "eta_exponent must be > 1 so that eta_n / mu_n -> 0 (got " +
        std::to_string(eta_exponent) + ")");
  }
  Schedule s;
  s.n = n;
  s.horizon = horizon;
  s.mu = horizon / static_cast<double>(n);
  s.eps_exponent = eps_exponent;
  s.eta_exponent = eta_exponent;
  s.epsilon = std::pow(s.mu, eps_exponent);
  s.eta = std::pow(s.mu, eta_exponent);
  return s;
}

std::size_t grid_cell(const Schedule& schedule, double t) {
  if (!(t >= 0.0) || !(t <= schedule.horizon)) {
    throw OutOfRange("time " + std::to_string(t) + " is outside [0, " +
                     std::to_string(schedule.horizon) + "]");
  }
  const std::size_t last = schedule.n - 1;
  if (t == schedule.horizon) return last;
  auto k = static_cast<std::size_t>(std::floor(t / schedule.mu));
  if (k > last) k = last;
  while (k < last && schedule.node_time(k + 1) <= t) ++k;
  while (k > 0 && schedule.node_time(k) > t) --k;
  return k;
}

std::pair<double, double> grid_delta_theta(const Schedule& schedule, double t) {
  const std::size_t k = grid_cell(schedule, t);
  return {schedule.node_time(k), schedule.node_time(k + 1)};
}

Vector Perturbation::evaluate(double t, const Point& x) const {
  Vector v = f(t, x);
  if (v.size() != x.size() || !all_finite(v)) {
    throw NonFiniteDrift("drift returned a non-finite or misshapen value at t = " +
                         std::to_string(t));
  }
  const double bound = h(x) + std::sqrt(gamma);
  const double norm = v.norm();
  if (norm > bound * (1.0 + 1e-12)) {
    throw HypothesisViolation("drift norm " + std::to_string(norm) +
                              " exceeds h(x) + sqrt(gamma) = " +
                              std::to_string(bound) + " at t = " +
                              std::to_string(t));
  }
  return v;
}

Perturbation Perturbation::zero() {
  Perturbation p;
  p.f = [](double, const Point& x) -> Vector { return Vector::Zero(x.size()); };
  p.h = [](const Point&) { return 0.0; };
  return p;
}

Perturbation Perturbation::constant(Vector c, double gamma) {
  Perturbation p;
  const double norm = c.norm();
  p.f = [c = std::move(c)](double, const Point&) -> Vector { return c; };
  p.h = [norm](const Point&) { return norm; };
  p.gamma = gamma;
  return p;
}

Vector drift_integral(const Perturbation& p, const Point& x, double t_from,
                      double t_to, std::size_t subintervals) {
  if (!(t_to >= t_from)) {
    throw InvalidArgument("drift integral needs t_from <= t_to");
  }
  if (subintervals < 1) throw InvalidArgument("quadrature needs >= 1 panel");
  if (t_to == t_from) return Vector::Zero(x.size());

  const double h = (t_to - t_from) / static_cast<double>(subintervals);
  Vector left = p.evaluate(t_from, x);
  Vector sum = Vector::Zero(x.size());
  for (std::size_t i = 0; i < subintervals; ++i) {
    const double a = t_from + static_cast<double>(i) * h;
    const double b = i + 1 == subintervals ? t_to : a + h;
    const Vector mid = p.evaluate(0.5 * (a + b), x);
    Vector right = p.evaluate(b, x);
    sum += ((b - a) / 6.0) * (left + 4.0 * mid + right);
    left = std::move(right);
  }
  return sum;
}

Trajectory catching_up_run(const SetDescriptor& set, const Perturbation& p,
                           const Point& x0, const Schedule& schedule,
                           const RunOptions& options) {
  if (!all_finite(x0)) throw InvalidArgument("initial state must be finite");
  if (schedule.n < 1) throw InvalidArgument("schedule needs at least one step");

  auto traj = std::make_shared<Trajectory>();
  traj->schedule = schedule;
  traj->quadrature_subintervals = options.quadrature_subintervals;
  traj->grid.reserve(schedule.n + 1);
  for (std::size_t k = 0; k <= schedule.n; ++k) {
    traj->grid.push_back(schedule.node_time(k));
  }

  const DistanceEstimate d0 = distance_bounds(set, 0.0, x0);
  if (d0.lower > schedule.eta) {
    throw InfeasibleInitial("initial state is at distance >= " +
                            std::to_string(d0.lower) + " from C(0), above eta_n = " +
                            std::to_string(schedule.eta));
  }
  traj->initial_warning = d0.upper > 0.0;

  traj->nodes.reserve(schedule.n + 1);
  traj->nodes.push_back(x0);
  Vector warm;
  ProjectionOptions proj;
  proj.max_iters = options.max_proj_iters;
  proj.check_every = options.check_every;

  for (std::size_t k = 0; k < schedule.n; ++k) {
    const Point& xk = traj->nodes.back();
    const double t_next = traj->grid[k + 1];
    Vector integral = drift_integral(p, xk, traj->grid[k], t_next,
                                     options.quadrature_subintervals);
    Point w = xk + integral;
    proj.warm_start = options.warm_start && warm.size() > 0 ? &warm : nullptr;

    ProjectionResult step;
    try {
      step = eps_eta_project(set, t_next, w, schedule.epsilon, schedule.eta, proj);
    } catch (const CertificateFailure& e) {
      throw ProjectionFailure(
          "projection failed at step " + std::to_string(k) + ": " + e.what(), k,
          std::make_shared<const ProjectionCertificate>(e.best()), traj);
    }

    if (options.warm_start) warm = step.multipliers;
    traj->drift_integrals.push_back(std::move(integral));
    traj->pre_projection.push_back(std::move(w));
    traj->certificates.push_back(step.certificate);
    traj->multipliers.push_back(std::move(step.multipliers));
    traj->nodes.push_back(std::move(step.point));
  }
  return std::move(*traj);
}

Point interpolate(const Trajectory& traj, const Perturbation& p, double t) {
  const std::size_t k = grid_cell(traj.schedule, t);
  if (k >= traj.steps()) {
    throw OutOfRange("time " + std::to_string(t) +
                     " lies beyond the computed part of the trajectory");
  }
  const double tk = traj.grid[k];
  const Point& xk = traj.nodes[k];
  const Vector jump = traj.nodes[k + 1] - xk - traj.drift_integrals[k];
  return xk + ((t - tk) / traj.schedule.mu) * jump +
         drift_integral(p, xk, tk, t, traj.quadrature_subintervals);
}

Vector interpolant_derivative(const Trajectory& traj, const Perturbation& p,
                              double t) {
  const std::size_t k = grid_cell(traj.schedule, t);
  if (k >= traj.steps()) {
    throw OutOfRange("time " + std::to_string(t) +
                     " lies beyond the computed part of the trajectory");
  }
  const Point& xk = traj.nodes[k];
  return (traj.nodes[k + 1] - xk - traj.drift_integrals[k]) / traj.schedule.mu +
         p.evaluate(t, xk);
}

}  // namespace sweep
