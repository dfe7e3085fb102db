#pragma once

// A-priori constants of the inexact catching-up scheme, bound verification on
// computed trajectories, and convergence studies against the rate envelope.

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sweep/catching_up.hpp"
#include "sweep/set_model.hpp"

namespace sweep {

struct SchemeConstants {
  double c_frak = 0.0;
  double K1 = 0.0, K2 = 0.0, K3 = 0.0, K4 = 0.0, K5 = 0.0, K6 = 0.0, K7 = 0.0;
  double sigma_n = 0.0;

  double horizon = 0.0;
  double lipschitz_C = 0.0;
  double lipschitz_h = 0.0;
  double h0 = 0.0;
  double x0_norm = 0.0;
  double gamma = 0.0;
  Schedule schedule;
};

/// (sqrt(eps_n) + eta_n) / mu_n for one schedule.
double c_frak_of(const Schedule& schedule);

/// c_frak defaults to c_frak_of(schedule); studies pass the max over their
/// schedules.
SchemeConstants theorem_constants(double horizon, double lipschitz_C,
                                  double lipschitz_h, double h0,
                                  double x0_norm, double gamma,
                                  const Schedule& schedule,
                                  std::optional<double> c_frak = {});

struct BoundCheck {
  std::string name;
  bool passed = true;
  /// min over evaluations of (bound - value); negative when violated.
  double worst_margin = 0.0;
  double worst_time = 0.0;
  std::size_t evaluations = 0;
};

struct BoundReport {
  std::vector<BoundCheck> checks;

  bool all_passed() const;
  const BoundCheck& get(const std::string& name) const;
};

/// Evaluates bounds (a)(i)-(vi), (b) with m = n and (c) at every grid node and
/// at `interior_samples` points per cell. Distances to polyhedral sets use
/// their sound upper bounds, so a pass is conclusive.
BoundReport verify_bounds(const Trajectory& traj, const SchemeConstants& consts,
                          const SetDescriptor& set, const Perturbation& p,
                          std::size_t interior_samples = 10);

/// Upper estimate of d_{C(t_k)}(x_k) per node. Throws UnsupportedKind when the
/// set offers no distance.
std::vector<double> feasibility_profile(const Trajectory& traj,
                                        const SetDescriptor& set);

/// sqrt(eps) + eta + mu + sqrt(eps)/mu + eta/mu + sqrt(eta mu)
double rate_envelope(const Schedule& schedule);

struct StudyProblem {
  SetDescriptor set;
  Perturbation perturbation;
  Point x0;
  double horizon = 1.0;
  double eps_exponent = 2.1;
  double eta_exponent = 1.05;
  RunOptions options;
};

struct StudyRow {
  std::size_t n = 0;
  double mu = 0.0, epsilon = 0.0, eta = 0.0;
  double error = 0.0;
  double envelope = 0.0;
  /// error^2 / envelope
  double ratio = 0.0;
  /// log(e_n / e_next) / log(n_next / n); absent on the last row.
  std::optional<double> empirical_order;
};

struct StudyTable {
  std::vector<StudyRow> rows;
  std::size_t reference_n = 0;

  bool errors_nonincreasing() const;
  bool errors_strictly_decreasing() const;
  /// max ratio / min ratio over the rows.
  double ratio_spread() const;
  void write_csv(std::ostream& out) const;
};

/// Runs the scheme at each n (concurrently) and at reference_n, measuring
/// e_n = max_k ||x_n(t_k) - x_ref(t_k)|| over the coarse nodes.
/// Throws InvalidArgument unless n_list is strictly ascending and
/// reference_n > max(n_list).
StudyTable convergence_study(const StudyProblem& problem,
                             const std::vector<std::size_t>& n_list,
                             std::size_t reference_n);

}  // namespace sweep
