#include "sweep/commands.hpp"

#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

#include <unistd.h>

#include "sweep/csv.hpp"
#include "sweep/errors.hpp"

namespace sweep {
namespace {

// Runs `body`, mapping library exceptions onto exit codes.
int guarded(std::ostream& log, const std::function<int()>& body) {
  try {
    return body();
  } catch (const ProjectionFailure& e) {
    log << "sweep: projection failure: " << e.what() << '\n';
    return kExitProjectionFailure;
  } catch (const SweepError& e) {
    log << "sweep: error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const std::filesystem::filesystem_error& e) {
    log << "sweep: error: " << e.what() << '\n';
    return kExitConfigError;
  }
}

int run_and_write(BuiltProblem& problem, const std::string& output_path,
                  const GlobalOverrides& overrides) {
  overrides.apply(problem.study.options);
  const Trajectory traj =
      catching_up_run(problem.study.set, problem.study.perturbation,
                      problem.study.x0, problem.schedule(), problem.study.options);
  std::ostringstream csv;
  write_trajectory_csv(csv, problem, traj);
  write_file_atomically(output_path, csv.str());
  return kExitOk;
}

}  // namespace

void GlobalOverrides::apply(RunOptions& options) const {
  if (quadrature_subintervals) options.quadrature_subintervals = *quadrature_subintervals;
  if (max_proj_iters) options.max_proj_iters = *max_proj_iters;
  if (no_warm_start) options.warm_start = false;
}

BuiltProblem demo_circuit_problem(CircuitVariant variant) {
  return build_lcs_problem(diode_circuit(variant), 1.0, ScheduleConfig{}, RunOptions{});
}

void write_trajectory_csv(std::ostream& out, const BuiltProblem& problem,
                          const Trajectory& traj) {
  const auto d = problem.study.x0.size();
  std::optional<OriginalSolution> original;
  Eigen::Index m = 0;
  if (problem.reform) {
    original = recover_original(*problem.reform, traj);
    m = problem.system->C.rows();
  }

  out << 't';
  for (Eigen::Index i = 1; i <= d; ++i) out << ",x_" << i;
  out << ",dist_residual,cert_gap,cert_eta,pg_iters";
  for (Eigen::Index i = 1; i <= m; ++i) out << ",zeta_" << i;
  if (original) out << ",comp_residual";
  out << '\n';

  for (std::size_t k = 0; k < traj.nodes.size(); ++k) {
    const double t = traj.grid[k];
    const Point& x = original ? original->x_nodes[k] : traj.nodes[k];
    out << format_real(t);
    for (Eigen::Index i = 0; i < x.size(); ++i) out << ',' << format_real(x(i));
    out << ',' << format_real(distance_bounds(problem.study.set, t, traj.nodes[k]).upper);
    if (k == 0) {
      out << ",0,0,0";
    } else {
      const ProjectionCertificate& c = traj.certificates[k - 1];
      out << ',' << format_real(c.value_gap) << ',' << format_real(c.enlargement_residual)
          << ',' << c.iterations;
    }
    if (original) {
      const Vector& zeta = original->zeta_nodes[k];
      for (Eigen::Index i = 0; i < zeta.size(); ++i) out << ',' << format_real(zeta(i));
      out << ',' << format_real(complementarity_residual(*problem.system, x, zeta, t));
    }
    out << '\n';
  }
}

void write_file_atomically(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write " + tmp.string());
    out << content;
    out.close();
    if (!out) throw ConfigError("failed writing " + tmp.string());
  }
  fs::rename(tmp, target);
}

int cmd_run(const std::string& config_path, const std::string& output_path,
            const GlobalOverrides& overrides, std::ostream& log) {
  return guarded(log, [&] {
    BuiltProblem problem = build_problem(load_problem(config_path));
    if (problem.reform && !problem.reform->theory_applies) {
      log << "sweep: note: the input signal is discontinuous; the convergence "
             "theory does not cover this run\n";
    }
    return run_and_write(problem, output_path, overrides);
  });
}

int cmd_study(const std::string& config_path, const std::vector<std::size_t>& n_list,
              std::size_t reference_n, const std::string& output_path,
              const GlobalOverrides& overrides, std::ostream& log) {
  return guarded(log, [&] {
    BuiltProblem problem = build_problem(load_problem(config_path));
    overrides.apply(problem.study.options);
    const StudyTable table = convergence_study(problem.study, n_list, reference_n);
    std::ostringstream csv;
    table.write_csv(csv);
    write_file_atomically(output_path, csv.str());
    if (!table.errors_nonincreasing()) {
      log << "sweep: convergence regression: e_n increased along the n list\n";
      return int(kExitRegression);
    }
    return int(kExitOk);
  });
}

int cmd_demo_circuit(CircuitVariant variant, const std::string& output_path,
                     const GlobalOverrides& overrides, std::ostream& log) {
  return guarded(log, [&] {
    BuiltProblem problem = demo_circuit_problem(variant);
    if (variant == CircuitVariant::Discontinuous) {
      log << "sweep: note: u(t) = sign(sin(4 pi t)) makes the constraint set jump; "
             "the convergence theory does not cover this variant and no bounds "
             "are checked\n";
    }
    return run_and_write(problem, output_path, overrides);
  });
}

}  // namespace sweep
