#include "ltvstab/app.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "ltvstab/oracle.hpp"
#include "ltvstab/quadrature.hpp"
#include "ltvstab/report.hpp"

namespace ltvstab {

namespace {

JobConfig load_with_overrides(const std::string& config_path,
                              const CliOverrides& ov) {
  JobConfig jc = load_job_config(config_path);
  if (ov.horizon) jc.grid.T = *ov.horizon;
  if (ov.grid_n) jc.grid.n = *ov.grid_n;
  for (const std::string& kv : ov.tol_overrides)
    apply_tol_override(jc.tol, kv);
  if (ov.output_format) {
    if (*ov.output_format != "json" && *ov.output_format != "csv")
      throw ConfigError("output format must be json or csv");
    jc.output.format = *ov.output_format;
  }
  if (ov.dump_traces) jc.output.dump_traces = true;
  try {
    jc.grid.validate();
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return jc;
}

int emit_report(const Report& rep, std::ostream& out, std::ostream& err) {
  std::string payload = rep.config.output.format == "csv"
                            ? report_to_csv(rep)
                            : report_to_json(rep).dump(2) + "\n";
  if (rep.config.output.path.empty()) {
    out << payload;
    return kExitOk;
  }
  std::ofstream f(rep.config.output.path, std::ios::binary);
  if (!f) {
    err << "error: cannot write report to '" << rep.config.output.path
        << "'\n";
    return kExitConfig;
  }
  f << payload;
  return kExitOk;
}

// The applicability gate shared by analyze/compare: build the report and
// map a hard applicability failure onto exit 2.
int analyze_into(const std::string& config_path, const CliOverrides& ov,
                 std::ostream& err, Report& rep) {
  JobConfig jc;
  try {
    jc = load_with_overrides(config_path, ov);
    rep = build_analyze_report(jc);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  if (rep.verdict.applicability_error) {
    err << "error: " << rep.verdict.note << "\n";
    return kExitConfig;
  }
  return kExitOk;
}

}  // namespace

int run_analyze(const std::string& config_path, const CliOverrides& ov,
                std::ostream& out, std::ostream& err) {
  Report rep;
  int rc = analyze_into(config_path, ov, err, rep);
  if (rc != kExitOk) return rc;
  return emit_report(rep, out, err);
}

int run_simulate(const std::string& config_path, const CliOverrides& ov,
                 std::ostream& out, std::ostream& err) {
  JobConfig jc;
  try {
    jc = load_with_overrides(config_path, ov);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }

  SystemSpec sys;
  try {
    sys = jc.system();
    check_nonvanishing(sys, jc.grid, jc.tol.tol_nonzero);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ApplicabilityError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }

  FundamentalMatrix fm;
  std::vector<Complex> intS;
  try {
    OdeOptions opts;
    opts.rtol = jc.tol.ode_rtol;
    opts.atol = jc.tol.ode_atol;
    fm = integrate_fundamental(sys, jc.grid, opts);
    Expr S = simplify(sys.a + sys.d);
    intS = cumulative_integral<Complex>(
        [&](double t) { return eval(S, t); }, fm.ts, jc.tol.quad_tol);
  } catch (const IntegratorError& e) {
    err << "error: integrator failure at t = " << e.t << ": " << e.what()
        << "\n";
    return kExitIntegrator;
  } catch (const EvalError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }

  std::ostringstream csv;
  csv << "t,phi11_re,phi11_im,phi12_re,phi12_im,phi21_re,phi21_im,"
         "phi22_re,phi22_im,norm,liouville_residual\n";
  csv.precision(17);
  for (std::size_t i = 0; i < fm.ts.size(); ++i) {
    const Mat2c& m = fm.phi[i];
    double resid = std::abs(m.det() - std::exp(intS[i]));
    csv << fm.ts[i] << ',' << m.m11.real() << ',' << m.m11.imag() << ','
        << m.m12.real() << ',' << m.m12.imag() << ',' << m.m21.real() << ','
        << m.m21.imag() << ',' << m.m22.real() << ',' << m.m22.imag() << ','
        << m.spectral_norm() << ',' << resid << '\n';
  }

  if (jc.output.path.empty()) {
    out << csv.str();
  } else {
    std::ofstream f(jc.output.path, std::ios::binary);
    if (!f) {
      err << "error: cannot write to '" << jc.output.path << "'\n";
      return kExitConfig;
    }
    f << csv.str();
  }
  return kExitOk;
}

int run_compare(const std::string& config_path, const CliOverrides& ov,
                std::ostream& out, std::ostream& err) {
  Report rep;
  int rc = analyze_into(config_path, ov, err, rep);
  if (rc != kExitOk) return rc;
  try {
    attach_oracle(rep);
  } catch (const IntegratorError& e) {
    err << "error: integrator failure at t = " << e.t << ": " << e.what()
        << "\n";
    return kExitIntegrator;
  } catch (const EvalError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  rc = emit_report(rep, out, err);
  if (rc != kExitOk) return rc;
  return rep.agreement == "false" ? kExitDisagreement : kExitOk;
}

int run_sweep(const std::string& cases_path, const CliOverrides& ov,
              std::ostream& out, std::ostream& err) {
  std::ifstream f(cases_path);
  if (!f) {
    err << "error: cannot open cases file '" << cases_path << "'\n";
    return kExitConfig;
  }

  struct Row {
    std::string id, verdict, empirical, agreement, decided_by;
    long wall_ms = 0;
    bool error = false;
    bool disagreement = false;
  };
  std::vector<Row> rows;

  std::string line;
  while (std::getline(f, line)) {
    std::string s = line;
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) continue;
    if (s[b] == '#') continue;
    std::istringstream ls(s);
    std::string id, path;
    ls >> id >> path;
    if (path.empty()) {
      path = id;
      id = std::filesystem::path(path).stem().string();
    }

    Row row;
    row.id = id;
    auto start = std::chrono::steady_clock::now();
    try {
      JobConfig jc = load_with_overrides(path, ov);
      Report rep = build_analyze_report(jc);
      if (rep.verdict.applicability_error)
        throw ConfigError(rep.verdict.note);
      attach_oracle(rep);
      row.verdict = to_string(rep.verdict.classification);
      row.empirical = to_string(rep.oracle->cls);
      row.agreement = rep.agreement;
      row.decided_by = to_string(rep.verdict.decided_by);
      row.disagreement = rep.agreement == "false";
    } catch (const std::exception& e) {
      row.error = true;
      row.verdict = "error";
      row.empirical = "error";
      row.agreement = "n/a";
      row.decided_by = "None";
      err << "case " << id << ": " << e.what() << "\n";
    }
    auto stop = std::chrono::steady_clock::now();
    row.wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                      stop - start)
                      .count();
    rows.push_back(std::move(row));
  }

  std::sort(rows.begin(), rows.end(),
            [](const Row& x, const Row& y) { return x.id < y.id; });

  out << "case,verdict,empirical,agreement,decided_by,wall_ms\n";
  bool any_error = false, any_disagreement = false;
  for (const Row& r : rows) {
    out << r.id << ',' << r.verdict << ',' << r.empirical << ','
        << r.agreement << ',' << r.decided_by << ',' << r.wall_ms << '\n';
    any_error |= r.error;
    any_disagreement |= r.disagreement;
  }
  if (any_disagreement) return kExitDisagreement;
  if (any_error) return kExitConfig;
  return kExitOk;
}

}  // namespace ltvstab
