#pragma once

#include <stdexcept>
#include <string>

#include "ltvstab/criteria.hpp"
#include "ltvstab/grid.hpp"
#include "ltvstab/reduction.hpp"

namespace ltvstab {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct OutputConfig {
  std::string format = "json";  // json | csv
  std::string path;             // empty: stdout
  bool dump_traces = false;
};

/// One analysis job: the system, the grid/horizon policy, all tolerances and
/// the output wishes. Parsed from the sectioned key-value config format.
struct JobConfig {
  std::string a = "0", b = "1", c = "0", d = "0";
  double t0 = 0.0;
  Grid grid{0.0, 60.0, 1024};
  CriterionConfig tol;
  OutputConfig output;

  /// Build the symbolic system (parses the four coefficient strings).
  SystemSpec system() const;
};

/// Parse the config text. Unknown sections or keys are errors.
JobConfig parse_job_config(const std::string& text);

/// Read and parse a config file; file errors become ConfigError.
JobConfig load_job_config(const std::string& path);

/// Apply a KEY=VAL tolerance override (the --tol flag).
void apply_tol_override(CriterionConfig& tol, const std::string& spec);

}  // namespace ltvstab
