#include <cstddef>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "sweep/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Inexact catching-up simulations of sweeping processes"};
  app.require_subcommand(1);
  app.fallthrough();

  sweep::GlobalOverrides overrides;
  std::size_t quadrature = 0;
  std::size_t max_iters = 0;
  auto* quad_opt = app.add_option("--quadrature-subintervals", quadrature,
                                  "Simpson panels per drift integral")
                       ->check(CLI::PositiveNumber);
  auto* iters_opt = app.add_option("--max-proj-iters", max_iters,
                                   "Projected-gradient budget per step")
                        ->check(CLI::PositiveNumber);
  app.add_flag("--no-warm-start", overrides.no_warm_start,
               "Start every dual solve from zero");

  std::string config, out;
  auto* run = app.add_subcommand("run", "Run one simulation from a problem file");
  run->add_option("--config", config, "Problem file (JSON)")->required();
  run->add_option("--out", out, "Trajectory CSV")->required();

  std::vector<std::size_t> n_list;
  std::size_t reference_n = 0;
  auto* study = app.add_subcommand("study", "Convergence study against a fine reference");
  study->add_option("--config", config, "Problem file (JSON)")->required();
  study->add_option("--n", n_list, "Comma-separated step counts")
      ->required()
      ->delimiter(',');
  study->add_option("--ref", reference_n, "Reference step count")->required();
  study->add_option("--out", out, "Study table CSV")->required();

  std::string variant = "smooth";
  auto* demo = app.add_subcommand("demo-circuit", "Built-in ideal-diode circuit");
  demo->add_option("--variant", variant, "smooth or discontinuous")
      ->check(CLI::IsMember({"smooth", "discontinuous"}));
  demo->add_option("--out", out, "Trajectory CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : sweep::kExitConfigError;
  }
  if (*quad_opt) overrides.quadrature_subintervals = quadrature;
  if (*iters_opt) overrides.max_proj_iters = max_iters;

  if (*run) return sweep::cmd_run(config, out, overrides);
  if (*study) return sweep::cmd_study(config, n_list, reference_n, out, overrides);
  const auto v = variant == "smooth" ? sweep::CircuitVariant::Smooth
                                     : sweep::CircuitVariant::Discontinuous;
  return sweep::cmd_demo_circuit(v, out, overrides);
}
