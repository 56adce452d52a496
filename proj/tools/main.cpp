// Command-line front end: analyze | simulate | compare | sweep.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "ltvstab/app.hpp"

int main(int argc, char** argv) {
  CLI::App app{
      "Stability analysis of two-dimensional linear time-varying ODE "
      "systems via Riccati reduction, cross-checked by direct integration"};
  app.require_subcommand(1);

  std::string config_path;
  ltvstab::CliOverrides ov;
  double horizon = 0.0;
  int grid_n = 0;
  std::string output_format;

  auto add_common = [&](CLI::App* cmd, bool config_required = true) {
    cmd->add_option("--config", config_path,
                    config_required ? "job config file" : "cases file")
        ->required();
    cmd->add_option("--horizon", horizon, "override the grid horizon T");
    cmd->add_option("--grid", grid_n, "override the grid sample count n");
    cmd->add_option("--tol", ov.tol_overrides,
                    "tolerance override KEY=VALUE (repeatable)");
    cmd->add_option("--output", output_format, "report format: json or csv");
    cmd->add_flag("--dump-traces", ov.dump_traces,
                  "include sampled traces in the report");
  };

  CLI::App* analyze = app.add_subcommand(
      "analyze", "reduce, check theorem conditions, classify");
  add_common(analyze);
  CLI::App* simulate = app.add_subcommand(
      "simulate", "integrate the fundamental matrix, emit a trajectory CSV");
  add_common(simulate);
  CLI::App* compare = app.add_subcommand(
      "compare", "analyze plus oracle integration and agreement check");
  add_common(compare);
  CLI::App* sweep = app.add_subcommand(
      "sweep", "run compare across a case list, emit a summary CSV");
  add_common(sweep, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return ltvstab::kExitConfig;
  }

  for (CLI::App* cmd : {analyze, simulate, compare, sweep}) {
    if (cmd->parsed()) {
      if (cmd->count("--horizon")) ov.horizon = horizon;
      if (cmd->count("--grid")) ov.grid_n = grid_n;
      if (cmd->count("--output")) ov.output_format = output_format;
    }
  }

  if (analyze->parsed())
    return ltvstab::run_analyze(config_path, ov, std::cout, std::cerr);
  if (simulate->parsed())
    return ltvstab::run_simulate(config_path, ov, std::cout, std::cerr);
  if (compare->parsed())
    return ltvstab::run_compare(config_path, ov, std::cout, std::cerr);
  if (sweep->parsed())
    return ltvstab::run_sweep(config_path, ov, std::cout, std::cerr);
  return ltvstab::kExitConfig;
}
