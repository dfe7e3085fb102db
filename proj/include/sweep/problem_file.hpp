#pragma once

// JSON problem files for the command-line tool. Parsing is strict: unknown
// keys, wrong types and missing required fields raise ConfigError.
//
// Top level:
//   kind            "sweeping" | "lcs"
//   horizon         T > 0
//   initial_state   [x0 ...]
//   schedule        {n, eps_exponent, eta_exponent}
//   solver          {quadrature_subintervals, max_proj_iters, check_every,
//                    warm_start}                               (optional)
//   signal          [{type: sine|sign_of_sine|constant|piecewise_linear, ...}]
//   set, drift      sweeping problems only
//   lcs             lcs problems only
//
// Infinite box bounds are written as the strings "inf" and "-inf".

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sweep/diagnostics.hpp"
#include "sweep/lcs.hpp"
#include "sweep/signal.hpp"

namespace sweep {

using RealRows = std::vector<std::vector<double>>;

struct ScheduleConfig {
  std::size_t n = 100;
  double eps_exponent = 2.1;
  double eta_exponent = 1.05;
  bool operator==(const ScheduleConfig&) const = default;
};

struct SolverConfig {
  std::size_t quadrature_subintervals = 8;
  std::size_t max_proj_iters = 200000;
  std::size_t check_every = 5;
  bool warm_start = true;
  bool operator==(const SolverConfig&) const = default;
};

/// type: halfspace {normal, offset}, box {lower, upper}, ball {center, radius},
/// orthant {}, polyhedron {P, C, G, F} (the metric polyhedron sqrt(P) K(t)).
/// The closed-form types accept a velocity and projector "outside_lagging".
struct SetConfig {
  std::string type;
  std::vector<double> normal;
  double offset = 0.0;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<double> center;
  double radius = 1.0;
  RealRows P, C, G;
  std::vector<double> F;
  std::vector<double> velocity;
  std::string projector = "exact";
  double lag_fraction = 0.9;
  bool operator==(const SetConfig&) const = default;
};

/// f(t, x) = matrix x + offset + input_matrix u(t). Omitted parts are zero.
struct DriftConfig {
  RealRows matrix;
  std::vector<double> offset;
  RealRows input_matrix;
  double gamma = 1e-6;
  bool operator==(const DriftConfig&) const = default;
};

struct LcsConfig {
  RealRows A, B, C, E, G;
  std::vector<double> F;
  std::optional<RealRows> P;
  double gamma = 1e-6;
  bool discontinuous_input = false;
  bool operator==(const LcsConfig&) const = default;
};

struct ProblemFile {
  std::string kind;
  double horizon = 1.0;
  std::vector<double> initial_state;
  ScheduleConfig schedule;
  SolverConfig solver;
  std::vector<SignalChannel> signal;
  std::optional<SetConfig> set;
  std::optional<DriftConfig> drift;
  std::optional<LcsConfig> lcs;
  bool operator==(const ProblemFile&) const = default;
};

ProblemFile parse_problem(const std::string& text);
ProblemFile load_problem(const std::string& path);
std::string serialize_problem(const ProblemFile& file);

/// A problem ready to run. For lcs problems the run happens in z = R x and
/// `system` / `reform` map results back.
struct BuiltProblem {
  StudyProblem study;
  std::size_t n = 0;
  std::optional<LCSystem> system;
  std::optional<SweepingReformulation> reform;

  Schedule schedule() const;
};

BuiltProblem build_problem(const ProblemFile& file);

BuiltProblem build_lcs_problem(const LCSystem& system, double horizon,
                               const ScheduleConfig& schedule,
                               const RunOptions& options, double gamma = 1e-6);

}  // namespace sweep
