#include "ltvstab/reduction.hpp"

#include <cmath>
#include <limits>

namespace ltvstab {

void check_nonvanishing(const SystemSpec& sys, const Grid& grid,
                        double tol_nonzero) {
  grid.validate();
  auto probe = [&](const Expr& e, const char* name) {
    double mn = std::numeric_limits<double>::infinity();
    for (double t : grid.times()) mn = std::min(mn, std::abs(eval(e, t)));
    if (!(mn > tol_nonzero))
      throw ApplicabilityError(
          std::string("coefficient ") + name +
          " must be nonvanishing on the analysis grid (min |" + name +
          "| = " + std::to_string(mn) + ", tol " + std::to_string(tol_nonzero) +
          "); the reduction divides by " + name);
  };
  probe(sys.b, "b");
  probe(sys.c, "c");
}

ReducedSystem reduce(const SystemSpec& sys, const Grid& grid,
                     double tol_nonzero) {
  check_nonvanishing(sys, grid, tol_nonzero);

  const Expr &a = sys.a, &b = sys.b, &c = sys.c, &d = sys.d;
  Expr ap = simplify(differentiate(a));
  Expr bp = simplify(differentiate(b));
  Expr cp = simplify(differentiate(c));
  Expr dp = simplify(differentiate(d));

  ReducedSystem red;
  red.t0 = sys.t0;
  red.b = b;
  red.c = c;
  red.S = simplify(a + d);
  red.A = simplify(a - d);
  Expr det_like = a * d - b * c;
  red.D1 = simplify((a * bp - ap * b) / b + det_like);
  red.D2 = simplify((d * cp - dp * c) / c + det_like);
  red.P1 = simplify(red.S + bp / b);
  red.P2 = simplify(red.S + cp / c);

  Expr half = Expr::constant(0.5);
  Expr quarter = Expr::constant(0.25);
  Expr P1p = simplify(differentiate(red.P1));
  Expr P2p = simplify(differentiate(red.P2));
  red.G1 = simplify(red.D1 + half * P1p - quarter * Expr::pow(red.P1, 2.0));
  red.G2 = simplify(red.D2 + half * P2p - quarter * Expr::pow(red.P2, 2.0));
  red.G1p = simplify(differentiate(red.G1));
  red.G2p = simplify(differentiate(red.G2));
  return red;
}

std::pair<ScalarEquation, ScalarEquation> scalar_equations(
    const ReducedSystem& red) {
  ScalarEquation first{simplify(-red.P1), red.D1, red.t0};
  ScalarEquation second{simplify(-red.P2), red.D2, red.t0};
  return {first, second};
}

ConditionOutcome check_G_realness(const ReducedSystem& red, const Grid& grid,
                                  GSelect which, double tol_im) {
  grid.validate();
  double worst = 0.0;
  auto scan = [&](const Expr& g) {
    for (double t : grid.times()) {
      Complex v = eval(g, t);
      double rel = std::abs(v.imag()) / (1.0 + std::abs(v));
      worst = std::max(worst, rel);
    }
  };
  if (which == GSelect::G1 || which == GSelect::Both) scan(red.G1);
  if (which == GSelect::G2 || which == GSelect::Both) scan(red.G2);

  ConditionOutcome out;
  out.summary = worst;
  if (worst <= tol_im) {
    out.status = ConditionStatus::Holds;
    out.note = "Im G negligible on grid";
  } else {
    out.status = ConditionStatus::Fails;
    out.note = "Im G exceeds tolerance on grid";
  }
  return out;
}

SystemSpec transform_negate_phi(const SystemSpec& sys) {
  return SystemSpec{sys.a, simplify(-sys.b), simplify(-sys.c), sys.d, sys.t0};
}

}  // namespace ltvstab
