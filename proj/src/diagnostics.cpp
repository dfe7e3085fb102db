#include "sweep/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <ostream>

#include "sweep/csv.hpp"
#include "sweep/errors.hpp"

namespace sweep {
namespace {

class BoundTracker {
 public:
  explicit BoundTracker(std::string name) { check_.name = std::move(name); }

  void observe(double value, double bound, double t) {
    const double margin = bound - value;
    if (check_.evaluations == 0 || margin < check_.worst_margin) {
      check_.worst_margin = margin;
      check_.worst_time = t;
    }
    if (!(value <= bound)) check_.passed = false;
    ++check_.evaluations;
  }

  BoundCheck result() const { return check_; }

 private:
  BoundCheck check_;
};

}  // namespace

double c_frak_of(const Schedule& schedule) {
  return (std::sqrt(schedule.epsilon) + schedule.eta) / schedule.mu;
}

SchemeConstants theorem_constants(double horizon, double lipschitz_C,
                                  double lipschitz_h, double h0,
                                  double x0_norm, double gamma,
                                  const Schedule& schedule,
                                  std::optional<double> c_frak) {
  if (!(horizon >= 0.0) || !(lipschitz_C >= 0.0) || !(lipschitz_h >= 0.0) ||
      !(h0 >= 0.0) || !(x0_norm >= 0.0)) {
    throw InvalidArgument("theorem constants need nonnegative inputs");
  }
  if (!(gamma > 0.0)) throw InvalidArgument("gamma must be positive");

  SchemeConstants k;
  k.horizon = horizon;
  k.lipschitz_C = lipschitz_C;
  k.lipschitz_h = lipschitz_h;
  k.h0 = h0;
  k.x0_norm = x0_norm;
  k.gamma = gamma;
  k.schedule = schedule;
  k.c_frak = c_frak.value_or(c_frak_of(schedule));

  const double T = horizon;
  const double Lc = lipschitz_C;
  const double Lh = lipschitz_h;
  const double sg = std::sqrt(gamma);

  k.K1 = T * (Lc + 2.0 * h0 + 2.0 * sg + k.c_frak) * std::exp(2.0 * Lh * T);
  k.K2 = k.K1 + x0_norm + T * (Lc + 2.0 * (h0 + Lh * k.K1 + sg) + k.c_frak);
  k.K3 = Lc + h0 + Lh * (k.K2 + x0_norm) + sg;
  k.K4 = Lc + 2.0 * h0 + 2.0 * Lh * k.K1 + 2.0 * sg;
  k.K5 = k.K4 + Lc + 2.0 * (h0 + Lh * k.K1) + 2.0 * sg;
  k.K6 = k.K5 + Lc;
  k.K7 = k.c_frak + Lc + 2.0 * (h0 + Lh * k.K1 + sg);
  k.sigma_n = 2.0 * schedule.epsilon + 2.0 * k.K3 * schedule.eta * schedule.mu +
              4.0 * schedule.eta * schedule.eta;
  return k;
}

bool BoundReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const BoundCheck& c) { return c.passed; });
}

const BoundCheck& BoundReport::get(const std::string& name) const {
  for (const auto& c : checks) {
    if (c.name == name) return c;
  }
  throw InvalidArgument("no bound named " + name);
}

BoundReport verify_bounds(const Trajectory& traj, const SchemeConstants& k,
                          const SetDescriptor& set, const Perturbation& p,
                          std::size_t interior_samples) {
  if (!traj.complete()) throw InvalidArgument("verify_bounds needs a complete run");

  const Schedule& s = traj.schedule;
  const double mu = s.mu;
  const double se = std::sqrt(s.epsilon);
  const double eta = s.eta;
  const double sg = std::sqrt(k.gamma);
  const double Lc = k.lipschitz_C;
  const Point& x0 = traj.nodes.front();

  BoundTracker a_i("a_i"), a_ii("a_ii"), a_iii("a_iii"), a_iv("a_iv"),
      a_v("a_v"), a_vi("a_vi"), b("b"), c("c");

  auto dist = [&](double t, const Point& x) {
    return distance_bounds(set, t, x).upper;
  };
  const double b_bound = k.K6 * mu + Lc * mu + 2.0 * se + 3.0 * eta;

  for (std::size_t i = 0; i < s.n; ++i) {
    const double t = traj.grid[i];
    const double t_next = traj.grid[i + 1];
    const Point& xk = traj.nodes[i];
    const Point& xn = traj.nodes[i + 1];

    const double dw = dist(t_next, traj.pre_projection[i]);
    a_i.observe(dw, (Lc + p.h(xk) + sg) * mu + eta, t);
    a_iv.observe(dw, k.K3 * mu + eta, t);
    a_ii.observe((xn - x0).norm(), k.K1, t_next);
    a_iii.observe(xk.norm(), k.K2, t);
    a_v.observe((xn - xk).norm(), k.K4 * mu + se + eta, t);
    b.observe(dist(t_next, xk), b_bound, t);

    for (std::size_t j = 1; j <= interior_samples; ++j) {
      const double tj =
          t + (t_next - t) * static_cast<double>(j) /
                  static_cast<double>(interior_samples + 1);
      const Point xt = interpolate(traj, p, tj);
      a_iii.observe(xt.norm(), k.K2, tj);
      a_vi.observe((xt - xn).norm(), k.K5 * mu + 2.0 * se + 2.0 * eta, tj);
      b.observe(dist(t_next, xt), b_bound, tj);
      c.observe(interpolant_derivative(traj, p, tj).norm(), k.K7, tj);
    }
  }
  const double T = traj.grid.back();
  a_iii.observe(traj.nodes.back().norm(), k.K2, T);
  b.observe(dist(T, traj.nodes.back()), b_bound, T);

  BoundReport report;
  for (const auto* tracker : {&a_i, &a_ii, &a_iii, &a_iv, &a_v, &a_vi, &b, &c}) {
    report.checks.push_back(tracker->result());
  }
  return report;
}

std::vector<double> feasibility_profile(const Trajectory& traj,
                                        const SetDescriptor& set) {
  std::vector<double> profile;
  profile.reserve(traj.nodes.size());
  for (std::size_t k = 0; k < traj.nodes.size(); ++k) {
    profile.push_back(distance_bounds(set, traj.grid[k], traj.nodes[k]).upper);
  }
  return profile;
}

double rate_envelope(const Schedule& s) {
  const double se = std::sqrt(s.epsilon);
  return se + s.eta + s.mu + se / s.mu + s.eta / s.mu + std::sqrt(s.eta * s.mu);
}

bool StudyTable::errors_nonincreasing() const {
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (!(rows[i].error <= rows[i - 1].error)) return false;
  }
  return true;
}

bool StudyTable::errors_strictly_decreasing() const {
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (!(rows[i].error < rows[i - 1].error)) return false;
  }
  return true;
}

double StudyTable::ratio_spread() const {
  if (rows.empty()) return 1.0;
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (const auto& r : rows) {
    lo = std::min(lo, r.ratio);
    hi = std::max(hi, r.ratio);
  }
  if (hi == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return lo == 0.0 ? std::numeric_limits<double>::infinity() : hi / lo;
}

void StudyTable::write_csv(std::ostream& out) const {
  out << "n,mu,eps,eta,e_n,env_n,ratio,empirical_order\n";
  for (const auto& r : rows) {
    out << r.n << ',' << format_real(r.mu) << ',' << format_real(r.epsilon) << ','
        << format_real(r.eta) << ',' << format_real(r.error) << ','
        << format_real(r.envelope) << ',' << format_real(r.ratio) << ',';
    if (r.empirical_order) out << format_real(*r.empirical_order);
    out << '\n';
  }
}

StudyTable convergence_study(const StudyProblem& problem,
                             const std::vector<std::size_t>& n_list,
                             std::size_t reference_n) {
  if (n_list.empty()) throw InvalidArgument("study needs at least one n");
  for (std::size_t i = 1; i < n_list.size(); ++i) {
    if (!(n_list[i] > n_list[i - 1])) {
      throw InvalidArgument("study n list must be strictly ascending");
    }
  }
  if (!(reference_n > n_list.back())) {
    throw InvalidArgument("reference n must exceed every study n");
  }

  auto run = [&problem](std::size_t n) {
    const Schedule s = make_schedule(n, problem.horizon, problem.eps_exponent,
                                     problem.eta_exponent);
    return catching_up_run(problem.set, problem.perturbation, problem.x0, s,
                           problem.options);
  };

  auto reference_future = std::async(std::launch::async, run, reference_n);
  std::vector<std::future<Trajectory>> futures;
  futures.reserve(n_list.size());
  for (std::size_t n : n_list) futures.push_back(std::async(std::launch::async, run, n));

  const Trajectory reference = reference_future.get();
  StudyTable table;
  table.reference_n = reference_n;
  for (auto& f : futures) {
    const Trajectory traj = f.get();
    StudyRow row;
    row.n = traj.schedule.n;
    row.mu = traj.schedule.mu;
    row.epsilon = traj.schedule.epsilon;
    row.eta = traj.schedule.eta;
    for (std::size_t k = 0; k < traj.nodes.size(); ++k) {
      const Point ref = interpolate(reference, problem.perturbation, traj.grid[k]);
      row.error = std::max(row.error, (traj.nodes[k] - ref).norm());
    }
    row.envelope = rate_envelope(traj.schedule);
    row.ratio = row.error * row.error / row.envelope;
    table.rows.push_back(row);
  }
  for (std::size_t i = 0; i + 1 < table.rows.size(); ++i) {
    auto& r = table.rows[i];
    const auto& next = table.rows[i + 1];
    r.empirical_order = std::log(r.error / next.error) /
                        std::log(double(next.n) / double(r.n));
  }
  return table;
}

}  // namespace sweep
