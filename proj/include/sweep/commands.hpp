#pragma once

// Subcommands of the `sweep` tool. Each returns a process exit code and writes
// one-line diagnostics to `log`.

#include <cstddef>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "sweep/circuit.hpp"
#include "sweep/problem_file.hpp"

namespace sweep {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfigError = 1,
  kExitProjectionFailure = 2,
  kExitRegression = 3,
};

/// Command-line settings that take precedence over the problem file.
struct GlobalOverrides {
  std::optional<std::size_t> quadrature_subintervals;
  std::optional<std::size_t> max_proj_iters;
  bool no_warm_start = false;

  void apply(RunOptions& options) const;
};

/// The built-in circuit with n = 100, exponents (2.1, 1.05), T = 1.
BuiltProblem demo_circuit_problem(CircuitVariant variant);

/// t, x_1..x_d, dist_residual, cert_gap, cert_eta, pg_iters, and for lcs
/// problems zeta_1..zeta_m, comp_residual. States are in original coordinates.
void write_trajectory_csv(std::ostream& out, const BuiltProblem& problem,
                          const Trajectory& traj);

/// Writes `content` to a sibling temporary file and renames it over `path`.
void write_file_atomically(const std::string& path, const std::string& content);

int cmd_run(const std::string& config_path, const std::string& output_path,
            const GlobalOverrides& overrides = {}, std::ostream& log = std::cerr);

int cmd_study(const std::string& config_path, const std::vector<std::size_t>& n_list,
              std::size_t reference_n, const std::string& output_path,
              const GlobalOverrides& overrides = {}, std::ostream& log = std::cerr);

int cmd_demo_circuit(CircuitVariant variant, const std::string& output_path,
                     const GlobalOverrides& overrides = {},
                     std::ostream& log = std::cerr);

}  // namespace sweep
