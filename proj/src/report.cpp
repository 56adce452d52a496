#include "ltvstab/report.hpp"

#include <sstream>

namespace ltvstab {

bool compatible(Classification verdict, GrowthClass cls) {
  switch (verdict) {
    case Classification::AsymptoticallyStable:
      return cls == GrowthClass::Vanishing;
    case Classification::LyapunovStable:
      return cls == GrowthClass::Bounded || cls == GrowthClass::Vanishing;
    case Classification::NotStable:
      return cls == GrowthClass::Unbounded;
    case Classification::Inconclusive:
      return true;
  }
  return true;
}

Report build_analyze_report(const JobConfig& jc) {
  Report rep;
  rep.config = jc;
  SystemSpec sys = jc.system();

  rep.verdict = classify(sys, jc.grid, jc.tol);

  try {
    Grid analysis = jc.grid;
    for (int k = 0; k < jc.tol.doublings; ++k) analysis = analysis.doubled();
    ReducedSystem red = reduce(sys, analysis, jc.tol.tol_nonzero);
    rep.reduced_ok = true;
    rep.S = to_string(red.S);
    rep.A = to_string(red.A);
    rep.D1 = to_string(red.D1);
    rep.D2 = to_string(red.D2);
    rep.G1 = to_string(red.G1);
    rep.G2 = to_string(red.G2);
    if (!rep.verdict.has_sign_case) {
      rep.verdict.sign_case = detect_sign_case(red, jc.grid, jc.tol);
      rep.verdict.has_sign_case = true;
    }
    if (jc.output.dump_traces) {
      Trace g1, g2;
      g1.ts = analysis.times();
      g2.ts = g1.ts;
      for (double t : g1.ts) {
        g1.vs.push_back(eval(red.G1, t).real());
        g2.vs.push_back(eval(red.G2, t).real());
      }
      rep.traces["G1"] = std::move(g1);
      rep.traces["G2"] = std::move(g2);
    }
  } catch (const std::exception& e) {
    rep.reduced_error = e.what();
  }
  return rep;
}

void attach_oracle(Report& rep) {
  const JobConfig& jc = rep.config;
  SystemSpec sys = jc.system();
  OdeOptions opts;
  opts.rtol = jc.tol.ode_rtol;
  opts.atol = jc.tol.ode_atol;
  EmpiricalTols tols;
  tols.vanish_tol = jc.tol.vanish_tol;
  tols.bound_cap = jc.tol.bound_cap;
  tols.slope_tol = jc.tol.slope_tol;
  tols.lambda = jc.tol.lambda;
  rep.oracle = empirical_classify(sys, jc.grid, jc.tol.doublings, opts, tols);
  rep.agreement = agreement_flag(rep.verdict.classification, rep.oracle);
}

std::string agreement_flag(Classification verdict,
                           const std::optional<EmpiricalClass>& oracle) {
  if (!oracle || verdict == Classification::Inconclusive ||
      oracle->cls == GrowthClass::Ambiguous)
    return "n/a";
  return compatible(verdict, oracle->cls) ? "true" : "false";
}

namespace {

nlohmann::json outcome_to_json(const ConditionOutcome& o) {
  return nlohmann::json{{"status", to_string(o.status)},
                        {"summary", o.summary},
                        {"note", o.note}};
}

nlohmann::json trace_to_json(const Trace& tr) {
  return nlohmann::json{{"t", tr.ts}, {"v", tr.vs}};
}

}  // namespace

nlohmann::json report_to_json(const Report& rep) {
  const JobConfig& jc = rep.config;
  nlohmann::json j;

  j["config"]["system"] = {{"a", jc.a}, {"b", jc.b},   {"c", jc.c},
                           {"d", jc.d}, {"t0", jc.t0}};
  j["config"]["grid"] = {{"T", jc.grid.T},
                         {"n", jc.grid.n},
                         {"doublings", jc.tol.doublings}};
  j["config"]["tolerances"] = {
      {"tol_im", jc.tol.tol_im},
      {"tol_nonzero", jc.tol.tol_nonzero},
      {"tol_trend", jc.tol.tol_trend},
      {"lambda", jc.tol.lambda},
      {"eps_floor", jc.tol.eps_floor},
      {"tol_rh", jc.tol.tol_rh},
      {"tol_mono", jc.tol.tol_mono},
      {"quad_tol", jc.tol.quad_tol},
      {"integral_stab_rel", jc.tol.integral_stab_rel},
      {"alpha_min", jc.tol.alpha_min},
      {"ode_rtol", jc.tol.ode_rtol},
      {"ode_atol", jc.tol.ode_atol},
      {"escape_radius", jc.tol.escape_radius},
      {"vanish_tol", jc.tol.vanish_tol},
      {"bound_cap", jc.tol.bound_cap},
      {"slope_tol", jc.tol.slope_tol}};
  j["config"]["output"] = {{"format", jc.output.format},
                           {"path", jc.output.path},
                           {"dump_traces", jc.output.dump_traces}};

  if (rep.reduced_ok) {
    j["reduced"] = {{"S", rep.S},   {"A", rep.A},   {"D1", rep.D1},
                    {"D2", rep.D2}, {"G1", rep.G1}, {"G2", rep.G2}};
  } else {
    j["reduced"] = nullptr;
    if (!rep.reduced_error.empty()) j["reduced_error"] = rep.reduced_error;
  }

  j["sign_case"] =
      rep.verdict.has_sign_case ? to_string(rep.verdict.sign_case) : "n/a";

  nlohmann::json reports = nlohmann::json::array();
  for (const ConditionReport& r : rep.verdict.reports) {
    nlohmann::json jr;
    jr["theorem"] = to_string(r.theorem);
    nlohmann::json conds = nlohmann::json::array();
    for (const auto& [label, outcome] : r.conditions) {
      nlohmann::json row = outcome_to_json(outcome);
      row["label"] = label;
      conds.push_back(row);
    }
    jr["conditions"] = conds;
    jr["gate"] = outcome_to_json(r.gate);
    jr["lyapunov"] = outcome_to_json(r.lyapunov);
    jr["asymptotic"] = outcome_to_json(r.asymptotic);
    reports.push_back(jr);
  }
  j["reports"] = reports;

  j["verdict"] = {{"classification", to_string(rep.verdict.classification)},
                  {"decided_by", to_string(rep.verdict.decided_by)},
                  {"note", rep.verdict.note},
                  {"applicability_error", rep.verdict.applicability_error}};

  if (rep.oracle) {
    j["oracle"] = {{"class", to_string(rep.oracle->cls)},
                   {"growth_exponent", rep.oracle->growth_exponent}};
  } else {
    j["oracle"] = nullptr;
  }
  j["agreement"] = rep.agreement;

  if (!rep.traces.empty()) {
    for (const auto& [name, tr] : rep.traces)
      j["traces"][name] = trace_to_json(tr);
  }
  return j;
}

std::string report_to_csv(const Report& rep) {
  std::ostringstream out;
  out << "section,key,value\n";
  out << "verdict,classification," << to_string(rep.verdict.classification)
      << "\n";
  out << "verdict,decided_by," << to_string(rep.verdict.decided_by) << "\n";
  out << "verdict,sign_case,"
      << (rep.verdict.has_sign_case ? to_string(rep.verdict.sign_case) : "n/a")
      << "\n";
  out << "oracle,class,"
      << (rep.oracle ? to_string(rep.oracle->cls) : "not run") << "\n";
  out << "oracle,agreement," << rep.agreement << "\n";
  for (const ConditionReport& r : rep.verdict.reports) {
    std::string thm = to_string(r.theorem);
    for (const auto& [label, outcome] : r.conditions)
      out << "theorem " << thm << "," << label << ","
          << to_string(outcome.status) << "\n";
    out << "theorem " << thm << ",lyapunov," << to_string(r.lyapunov.status)
        << "\n";
    out << "theorem " << thm << ",asymptotic,"
        << to_string(r.asymptotic.status) << "\n";
  }
  return out.str();
}

}  // namespace ltvstab
