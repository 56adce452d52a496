#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ltvstab/config.hpp"

namespace ltvstab {

// Exit codes shared by every subcommand:
//   0 analysis completed (including Inconclusive verdicts)
//   2 config or applicability error
//   3 integrator failure
//   4 hard criterion-vs-oracle disagreement
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitIntegrator = 3;
inline constexpr int kExitDisagreement = 4;

/// Command-line overrides applied on top of the config file.
struct CliOverrides {
  std::optional<double> horizon;
  std::optional<int> grid_n;
  std::vector<std::string> tol_overrides;  // KEY=VALUE
  std::optional<std::string> output_format;
  bool dump_traces = false;
};

int run_analyze(const std::string& config_path, const CliOverrides& ov,
                std::ostream& out, std::ostream& err);
int run_simulate(const std::string& config_path, const CliOverrides& ov,
                 std::ostream& out, std::ostream& err);
int run_compare(const std::string& config_path, const CliOverrides& ov,
                std::ostream& out, std::ostream& err);
int run_sweep(const std::string& cases_path, const CliOverrides& ov,
              std::ostream& out, std::ostream& err);

}  // namespace ltvstab
