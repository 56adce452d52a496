#pragma once

#include <map>
#include <optional>
#include <string>

#include <json.hpp>

#include "ltvstab/config.hpp"
#include "ltvstab/criteria.hpp"
#include "ltvstab/oracle.hpp"

namespace ltvstab {

/// Everything a report emission needs: config echo, reduced expressions,
/// verdict, optional oracle result and the agreement flag.
struct Report {
  JobConfig config;
  bool reduced_ok = false;
  std::string S, A, D1, D2, G1, G2;  // canonical prints
  std::string reduced_error;
  Verdict verdict;
  std::optional<EmpiricalClass> oracle;
  std::string agreement = "n/a";  // "true" | "false" | "n/a"
  std::map<std::string, Trace> traces;
};

/// Verdict/growth compatibility: AsymptoticallyStable needs Vanishing,
/// LyapunovStable allows Bounded or Vanishing, NotStable needs Unbounded.
bool compatible(Classification verdict, GrowthClass cls);

/// "true"/"false"/"n/a"; n/a whenever either side is undecided. "false" is
/// the hard-disagreement tripwire behind exit code 4.
std::string agreement_flag(Classification verdict,
                           const std::optional<EmpiricalClass>& oracle);

/// Criteria-side analysis only; the oracle slot stays empty.
Report build_analyze_report(const JobConfig& jc);

/// Integrate the oracle, attach its class and set the agreement flag.
void attach_oracle(Report& rep);

nlohmann::json report_to_json(const Report& rep);
std::string report_to_csv(const Report& rep);

}  // namespace ltvstab
