#pragma once

#include <string>
#include <utility>
#include <vector>

#include "ltvstab/expr.hpp"
#include "ltvstab/grid.hpp"
#include "ltvstab/reduction.hpp"

namespace ltvstab {

enum class TheoremId {
  T2_1,
  T2_2,
  T2_3,
  T2_4,
  C2_1,
  T3_1,
  T3_2,
  T3_3,
  T3_4,
  T3_5,
  RouthHurwitz,
  None,
};

std::string to_string(TheoremId id);

/// Stability functionals, named after the display they implement. The a/b
/// suffix distinguishes the first (b, G1) and second (c, G2) lines.
enum class FunctionalKind {
  T31a,  // int Re S - ln|b| - 1/2 ln G1
  T31b,  // int Re S - ln|c| - 1/2 ln G2
  T32a,  // = T31a
  T32b,  // int (Re S + sqrt|G2|) - ln|c| - 1/2 ln|G2|
  T33a,  // int (Re S + sqrt|G1|) - ln|b| - 1/2 ln|G1|
  T33b,  // = T32b
  T34a,  // int Re S + ln|b| - 1/2 ln G1 + 2 ln(1+|P1|)
  T34b,  // int Re S + ln|b| + 1/2 ln G1
  T35,   // int (Re S + 2 sqrt|G1|) + ln|b| + 2 ln(1+|P1+2 sqrt|G1||) - 1/2 ln|G1|
  T21,   // int Re p + 1/2 ln G
  T22a,  // int Re p - 2 ln(1+|p|) + 1/2 ln G
  T22b,  // int Re p - 1/2 ln G
  T23,   // int (Re p - 2 sqrt|G|) + 1/2 ln|G|
  T24,   // T23 - 2 ln(1+|p - 2 sqrt|G||)
};

struct PreconditionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Tolerances, thresholds and horizon policy for the condition machinery.
struct CriterionConfig {
  double tol_im = 1e-9;        // realness of Gk
  double tol_nonzero = 1e-8;   // nonvanishing floor for b, c
  double tol_trend = 1e-3;     // tail-trend decision tolerance
  double lambda = 40.0;        // divergence threshold for functional traces
  double eps_floor = 1e-6;     // floor for conditions requiring |G| >= eps
  double tol_rh = 1e-9;        // Routh-Hurwitz boundary tolerance
  double tol_mono = 1e-9;      // slack for the non-increasing test
  double quad_tol = 1e-10;     // quadrature tolerance per unit time
  double integral_stab_rel = 0.01;  // improper-integral doubling stability
  double alpha_min = 0.01;     // smallest admissible fitted envelope exponent
  int doublings = 1;           // horizon-doubling count for trend decisions

  // oracle parameters used by compare-style callers
  double ode_rtol = 1e-8;
  double ode_atol = 1e-10;
  double escape_radius = 1e8;
  double vanish_tol = 1e-3;
  double bound_cap = 1e6;
  double slope_tol = 1e-3;
};

struct LimitEstimate {
  enum class Kind { Finite, DivergesPlus, DivergesMinus, NoTrend };
  Kind kind = Kind::NoTrend;
  double value = 0.0;  // limit estimate when Finite
  double slope = 0.0;
  double tail_min = 0.0, tail_max = 0.0;
  double trace_max = 0.0, trace_min = 0.0;
};

/// Tail-trend analysis of a sampled trace (needs >= 64 samples).
LimitEstimate estimate_limit(const Trace& tr, const CriterionConfig& cfg);

/// sup/inf finiteness proxies built on estimate_limit plus the divergence
/// threshold; an oscillating trace that stays within the threshold band is
/// bounded.
ConditionOutcome check_bounded_above(const Trace& tr,
                                     const CriterionConfig& cfg);
ConditionOutcome check_bounded_below(const Trace& tr,
                                     const CriterionConfig& cfg);

/// L(t) = G(t)^{-1/4} int_{t0}^t |(sqrt G)'| / G^{1/4}, G > 0 on the grid.
Trace compute_L(const Expr& Gk, const Expr& Gkp, const Grid& grid,
                const CriterionConfig& cfg);

/// Var(t) = int_{t0}^t |f'(tau)| dtau with f' taken symbolically.
Trace total_variation(const Expr& f, const Grid& grid,
                      const CriterionConfig& cfg);

/// rho_x(t) = min over gridded t1 <= t of R_x(t1; t), x > 0 on the grid.
Trace compute_R_rho(const Expr& x, const Expr& xp, const Grid& grid,
                    const CriterionConfig& cfg);

Trace functional_trace(FunctionalKind kind, const ReducedSystem& red,
                       const Grid& grid, const CriterionConfig& cfg);
Trace functional_trace(FunctionalKind kind, const ScalarEquation& eq,
                       const Expr& G, const Grid& grid,
                       const CriterionConfig& cfg);

/// Labeled condition outcomes of one theorem plus its functional verdicts.
struct ConditionReport {
  TheoremId theorem = TheoremId::None;
  std::vector<std::pair<std::string, ConditionOutcome>> conditions;
  ConditionOutcome gate;        // aggregated hypothesis of the theorem
  ConditionOutcome lyapunov;    // sup-lines (or inf-lines) decision
  ConditionOutcome asymptotic;  // limit-lines decision
};

ConditionReport check_theorem_conditions(TheoremId theorem,
                                         const ReducedSystem& red,
                                         const SystemSpec& sys,
                                         const Grid& grid,
                                         const CriterionConfig& cfg);

/// Sign pattern of (G1, G2) on the grid, following the section-3 case list.
enum class SignCase { I, II, III, IV, V, VI, Zero, Indefinite };

std::string to_string(SignCase c);

SignCase detect_sign_case(const ReducedSystem& red, const Grid& grid,
                          const CriterionConfig& cfg);

enum class Classification {
  AsymptoticallyStable,
  LyapunovStable,
  NotStable,
  Inconclusive,
};

std::string to_string(Classification c);

struct Verdict {
  Classification classification = Classification::Inconclusive;
  TheoremId decided_by = TheoremId::None;
  std::vector<ConditionReport> reports;
  SignCase sign_case = SignCase::Indefinite;
  std::string note;
  bool applicability_error = false;
  bool has_sign_case = false;
};

/// Full pipeline: Routh-Hurwitz shortcut for real constant systems, otherwise
/// reduction, sign-case dispatch and the matching theorems in precedence
/// order. Applicability failures come back as Inconclusive verdicts with
/// applicability_error set, never as exceptions.
Verdict classify(const SystemSpec& sys, const Grid& grid,
                 const CriterionConfig& cfg);

/// Scalar-equation pipeline (Theorems 2.1-2.4 and Corollary 2.1) driven by
/// the sign of G = q - p'/2 - p^2/4.
Verdict classify_scalar(const ScalarEquation& eq, const Grid& grid,
                        const CriterionConfig& cfg);

}  // namespace ltvstab
