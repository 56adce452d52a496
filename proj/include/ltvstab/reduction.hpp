#pragma once

#include <stdexcept>
#include <utility>

#include "ltvstab/expr.hpp"
#include "ltvstab/grid.hpp"

namespace ltvstab {

/// The analyzed object: phi' = a phi + b psi, psi' = c phi + d psi, t >= t0.
/// b and c must be nonvanishing on the analysis grid; the reduction divides
/// by both.
struct SystemSpec {
  Expr a, b, c, d;
  double t0 = 0.0;
};

/// Raised when a system violates an applicability assumption (vanishing b or
/// c, or a coefficient that cannot be evaluated on the window).
struct ApplicabilityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Symbolic reduction products:
///   S = a + d,  A = a - d,
///   D1 = (a b' - a' b)/b + a d - b c,   D2 = (d c' - d' c)/c + a d - b c,
///   P1 = S + b'/b,  P2 = S + c'/c,
///   Gk = Dk + Pk'/2 - Pk^2/4, with G1p/G2p their symbolic derivatives.
struct ReducedSystem {
  Expr S, A, D1, D2, P1, P2, G1, G2, G1p, G2p;
  Expr b, c;  // the coefficients the reduction divided by; the section-3
              // functionals need ln|b| and ln|c|
  double t0 = 0.0;
};

/// phi'' + p(t) phi' + q(t) phi = 0.
struct ScalarEquation {
  Expr p, q;
  double t0 = 0.0;
};

/// Throws ApplicabilityError unless min |b|, min |c| > tol_nonzero on the grid.
void check_nonvanishing(const SystemSpec& sys, const Grid& grid,
                        double tol_nonzero);

/// Build all reduction products as simplified symbolic expressions.
ReducedSystem reduce(const SystemSpec& sys, const Grid& grid,
                     double tol_nonzero = 1e-8);

/// The two decoupled second-order equations: p = -Pk, q = Dk (the reduction
/// subtracts the bracket where the scalar normal form adds p).
std::pair<ScalarEquation, ScalarEquation> scalar_equations(
    const ReducedSystem& red);

enum class GSelect { G1, G2, Both };

/// Holds iff max |Im Gk(t)| <= tol_im * (1 + |Gk(t)|) over the grid for the
/// selected Gk.
ConditionOutcome check_G_realness(const ReducedSystem& red, const Grid& grid,
                                  GSelect which, double tol_im);

/// The system satisfied by (-phi, psi): negates b and c.
SystemSpec transform_negate_phi(const SystemSpec& sys);

}  // namespace ltvstab
