#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "ltvstab/oracle.hpp"
#include "ltvstab/reduction.hpp"
#include "testutil.hpp"

using namespace ltvstab;

namespace {

constexpr double kPi = std::numbers::pi;

SystemSpec constant_system(double a, double b, double c, double d) {
  return SystemSpec{Expr::constant(a), Expr::constant(b), Expr::constant(c),
                    Expr::constant(d), 0.0};
}

double mat_dist(const Mat2c& x, const Mat2c& y) {
  return (x - y).spectral_norm();
}

}  // namespace

TEST_CASE("rotation system returns to the identity after one period") {
  Grid g{0.0, 2.0 * kPi, 128};
  auto fm = integrate_fundamental(constant_system(0, 1, -1, 0), g);
  REQUIRE(!fm.truncated_at);
  CHECK(mat_dist(fm.phi.back(), Mat2c::identity()) < 1e-6);
  for (std::size_t i = 0; i < fm.ts.size(); ++i) {
    double t = fm.ts[i];
    Mat2c want{{std::cos(t), 0}, {std::sin(t), 0},
               {-std::sin(t), 0}, {std::cos(t), 0}};
    CHECK(mat_dist(fm.phi[i], want) < 1e-6);
  }
}

TEST_CASE("near-diagonal decay follows the eigen decomposition") {
  const double eps = 0.001;
  Grid g{0.0, 5.0, 128};
  auto fm = integrate_fundamental(constant_system(-1, eps, eps, -1), g);
  for (std::size_t i = 0; i < fm.ts.size(); ++i) {
    double t = fm.ts[i];
    double e = std::exp(-t);
    // exact: exp(-t) [[cosh eps t, sinh eps t], [sinh eps t, cosh eps t]]
    Mat2c exact{{e * std::cosh(eps * t), 0},
                {e * std::sinh(eps * t), 0},
                {e * std::sinh(eps * t), 0},
                {e * std::cosh(eps * t), 0}};
    CHECK(mat_dist(fm.phi[i], exact) < 1e-8);
    Mat2c diag{{e, 0}, {0, 0}, {0, 0}, {e, 0}};
    CHECK(mat_dist(fm.phi[i], diag) < 5e-4);  // sinh/cosh corrections ~ eps t e^{-t}
  }
}

TEST_CASE("triangular system integrates exactly to [[1,t],[0,1]]") {
  Grid g{0.0, 8.0, 128};
  auto fm = integrate_fundamental(constant_system(0, 1, 0, 0), g);
  for (std::size_t i = 0; i < fm.ts.size(); ++i) {
    Mat2c want{{1, 0}, {fm.ts[i], 0}, {0, 0}, {1, 0}};
    CHECK(mat_dist(fm.phi[i], want) < 1e-9);
  }
}

TEST_CASE("scalar equation trajectories match analytic solutions") {
  Grid g{0.0, 6.0, 128};
  SUBCASE("phi'' + phi = 0 from (1, 0) is cos t") {
    ScalarEquation eq{Expr::constant(0.0), Expr::constant(1.0), 0.0};
    auto tr = integrate_scalar(eq, {1, 0}, {0, 0}, g);
    for (std::size_t i = 0; i < tr.ts.size(); ++i)
      CHECK(std::abs(tr.phi[i] - Complex(std::cos(tr.ts[i]), 0)) < 1e-6);
  }
  SUBCASE("phi'' + 2 phi' + 2 phi = 0 from (1, -1) is exp(-t) cos t") {
    ScalarEquation eq{Expr::constant(2.0), Expr::constant(2.0), 0.0};
    auto tr = integrate_scalar(eq, {1, 0}, {-1, 0}, g);
    for (std::size_t i = 0; i < tr.ts.size(); ++i) {
      double want = std::exp(-tr.ts[i]) * std::cos(tr.ts[i]);
      CHECK(std::abs(tr.phi[i] - Complex(want, 0)) < 1e-6);
    }
  }
  SUBCASE("phi'' - phi = 0 from (1, 1) is exp(t)") {
    ScalarEquation eq{Expr::constant(0.0), Expr::constant(-1.0), 0.0};
    auto tr = integrate_scalar(eq, {1, 0}, {1, 0}, g);
    for (std::size_t i = 0; i < tr.ts.size(); ++i) {
      double want = std::exp(tr.ts[i]);
      CHECK(std::abs(tr.phi[i] - Complex(want, 0)) < 1e-6 * want);
    }
  }
}

TEST_CASE("Riccati blow-up of u' + u^2 + 1 = 0 lands at pi/2") {
  SystemSpec sys = constant_system(0, 1, -1, 0);
  Grid g{0.0, 4.0, 128};
  ReducedSystem red = reduce(sys, g);
  auto tr = integrate_riccati(RiccatiKind::Eq28, sys, red, {0, 0}, g);
  REQUIRE(tr.blow_up_at.has_value());
  CHECK(std::abs(*tr.blow_up_at - kPi / 2.0) < 1e-3);
  for (std::size_t i = 0; i < tr.ts.size(); ++i) {
    CHECK(tr.ts[i] < *tr.blow_up_at);
    if (tr.ts[i] < 1.4)
      CHECK(std::abs(tr.ys[i] - Complex(-std::tan(tr.ts[i]), 0)) < 1e-6);
  }
}

TEST_CASE("stationary complex Riccati solution y = i") {
  SystemSpec sys = constant_system(0, 1, -1, 0);
  Grid g{0.0, 10.0, 128};
  ReducedSystem red = reduce(sys, g);
  auto tr = integrate_riccati(RiccatiKind::Eq23, sys, red, {0, 1}, g);
  REQUIRE(!tr.blow_up_at.has_value());
  for (const Complex& y : tr.ys) CHECK(std::abs(y - Complex(0, 1)) < 1e-9);
}

TEST_CASE("chi-quotient construction solves the w-Riccati globally") {
  // Lemma 2.2 setup: chi'' + G1 chi = 0, w = chi'/chi with a complex shift.
  SystemSpec sys{Expr::constant(-1.0), parse_expr("2 + sin(t)"),
                 Expr::constant(1.0), Expr::constant(-1.0), 0.0};
  Grid g{0.0, 12.0, 256};
  ReducedSystem red = reduce(sys, g);

  Complex lambda{0.0, 1.0};
  Complex p1_0 = eval(red.P1, 0.0);
  Complex shift = lambda - 0.5 * p1_0;
  REQUIRE(std::abs(shift.imag()) > 0.1);

  // chi(0) = 1 + i, chi'(0) = (l1 - l2) + i (l1 + l2)
  double l1 = shift.real(), l2 = shift.imag();
  ScalarEquation chi_eq{Expr::constant(0.0), red.G1, 0.0};
  auto chi = integrate_scalar(chi_eq, Complex(1, 1),
                              Complex(l1 - l2, l1 + l2), g);

  auto w = integrate_riccati(RiccatiKind::Eq218, sys, red, shift, g);
  REQUIRE(!w.blow_up_at.has_value());
  REQUIRE(w.ts.size() == chi.ts.size());

  double worst = 0.0;
  for (std::size_t i = 0; i < chi.ts.size(); ++i) {
    REQUIRE(std::abs(chi.phi[i]) > 1e-12);  // chi never vanishes
    Complex quotient = chi.dphi[i] / chi.phi[i];
    worst = std::max(worst, std::abs(quotient - w.ys[i]));
  }
  CHECK(worst < 1e-5);
}

TEST_CASE("reconstruction from stationary trajectories gives exp(i t)") {
  SystemSpec sys = constant_system(0, 1, -1, 0);
  Grid g{0.0, 10.0, 256};
  ReducedSystem red = reduce(sys, g);
  auto u = integrate_riccati(RiccatiKind::Eq28, sys, red, {0, 1}, g);
  auto v = integrate_riccati(RiccatiKind::Eq210, sys, red, {0, 1}, g);
  REQUIRE(!u.blow_up_at);
  REQUIRE(!v.blow_up_at);

  auto sp = reconstruct_solution(sys, u, v, {1, 0}, {0, 1});
  double worst = 0.0;
  for (std::size_t i = 0; i < sp.ts.size(); ++i) {
    Complex want = std::exp(Complex(0, sp.ts[i]));
    worst = std::max(worst, std::abs(sp.phi[i] - want));
    worst = std::max(worst, std::abs(sp.psi[i] - Complex(0, 1) * want));
  }
  CHECK(worst < 1e-8);

  // residual of the original system along the reconstruction
  double res = 0.0;
  for (std::size_t i = 0; i < sp.ts.size(); ++i) {
    Complex lhs = u.ys[i] * sp.phi[i];  // phi' = u phi
    Complex rhs = eval(sys.a, sp.ts[i]) * sp.phi[i] +
                  eval(sys.b, sp.ts[i]) * sp.psi[i];
    res = std::max(res, std::abs(lhs - rhs));
  }
  CHECK(res < 1e-8);
}

TEST_CASE("coupling violation is rejected") {
  SystemSpec sys = constant_system(0, 1, -1, 0);
  Grid g{0.0, 5.0, 128};
  ReducedSystem red = reduce(sys, g);
  auto u = integrate_riccati(RiccatiKind::Eq28, sys, red, {0, 1}, g);
  auto v = integrate_riccati(RiccatiKind::Eq210, sys, red,
                             Complex(1e-3, 1.0), g);
  CHECK_THROWS_AS(reconstruct_solution(sys, u, v, {1, 0}, {0, 1}),
                  CouplingError);
}

TEST_CASE("Liouville identity holds along integrated systems") {
  // Horizons sit inside the double-precision conditioning window of the
  // determinant: the relative det error grows like eps * exp(spread * t)
  // regardless of integrator quality.
  Grid g{0.0, 10.0, 256};
  for (const SystemSpec& sys :
       {constant_system(0, 1, -1, 0), constant_system(-1, 1, -1, -1)}) {
    auto fm = integrate_fundamental(sys, g);
    CHECK(liouville_max_residual(fm, sys) < 1e-5);
  }
  SystemSpec spread{Expr::constant(-1.0), parse_expr("2 + sin(t)"),
                    Expr::constant(1.0), Expr::constant(-1.0), 0.0};
  auto fm = integrate_fundamental(spread, Grid{0.0, 6.0, 256});
  CHECK(liouville_max_residual(fm, spread) < 1e-5);
}

TEST_CASE("dense-output midpoint residual stays within the error budget") {
  SystemSpec sys{Expr::constant(-1.0), parse_expr("2 + sin(t)"),
                 Expr::constant(1.0), Expr::constant(-1.0), 0.0};
  Grid g{0.0, 10.0, 512};
  OdeOptions opts;
  opts.rtol = 1e-6;
  opts.atol = 1e-9;
  auto fm = integrate_fundamental(sys, g, opts);
  double worst_ratio = 0.0;
  for (std::size_t i = 0; i + 1 < fm.ts.size(); ++i) {
    double h = fm.ts[i + 1] - fm.ts[i];
    double tm = fm.ts[i] + 0.5 * h;
    Mat2c hm, hd;
    const Mat2c &y0 = fm.phi[i], &y1 = fm.phi[i + 1];
    const Mat2c &f0 = fm.phi_dot[i], &f1 = fm.phi_dot[i + 1];
    auto mid = [&](Complex a0, Complex b0, Complex a1, Complex b1) {
      return hermite_midpoint(a0, b0, a1, b1, h);
    };
    auto m11 = mid(y0.m11, f0.m11, y1.m11, f1.m11);
    auto m12 = mid(y0.m12, f0.m12, y1.m12, f1.m12);
    auto m21 = mid(y0.m21, f0.m21, y1.m21, f1.m21);
    auto m22 = mid(y0.m22, f0.m22, y1.m22, f1.m22);
    hm = Mat2c{m11.value, m12.value, m21.value, m22.value};
    hd = Mat2c{m11.derivative, m12.derivative, m21.derivative, m22.derivative};

    Complex a = eval(sys.a, tm), b = eval(sys.b, tm);
    Complex c = eval(sys.c, tm), d = eval(sys.d, tm);
    Mat2c mphi{a * hm.m11 + b * hm.m21, a * hm.m12 + b * hm.m22,
               c * hm.m11 + d * hm.m21, c * hm.m12 + d * hm.m22};
    double resid = (hd - mphi).spectral_norm();
    double budget = 10.0 * (opts.atol + opts.rtol * hm.spectral_norm());
    worst_ratio = std::max(worst_ratio, resid / budget);
  }
  CHECK(worst_ratio <= 1.0);
}

TEST_CASE("halving rtol reduces the terminal error at least fourfold") {
  Grid g{0.0, 2.0 * kPi, 64};
  auto terminal_error = [&](double rtol) {
    OdeOptions opts;
    opts.rtol = rtol;
    opts.atol = 1e-14;
    opts.step_cap_scale = 1.0;
    auto fm = integrate_fundamental(constant_system(0, 1, -1, 0), g, opts);
    return mat_dist(fm.phi.back(), Mat2c::identity());
  };
  double e1 = terminal_error(4e-4);
  double e2 = terminal_error(2e-4);
  CHECK(e1 > 1e-12);  // stay above the round-off floor
  CHECK(e2 > 0.0);
  CHECK(e1 / e2 >= 4.0);
}

TEST_CASE("empirical growth classification") {
  Grid g{0.0, 30.0, 256};
  OdeOptions opts;
  CHECK(empirical_classify(constant_system(-1, 0.001, 0.001, -1), g, 1, opts)
            .cls == GrowthClass::Vanishing);
  CHECK(empirical_classify(constant_system(0, 1, -1, 0), g, 1, opts).cls ==
        GrowthClass::Bounded);
  CHECK(empirical_classify(constant_system(1, 1, 1, 1), g, 1, opts).cls ==
        GrowthClass::Unbounded);
}

TEST_CASE("Riccati-linear consistency along a time-varying system") {
  // y = psi/phi from the integrated linear system must satisfy the
  // y-Riccati; u = b y + a must satisfy the u-Riccati; w = u - P1/2 the
  // w-Riccati. Residuals are measured with Hermite midpoint derivatives and
  // normalized backward-error style.
  SystemSpec sys{Expr::constant(-1.0), parse_expr("2 + sin(t)"),
                 Expr::constant(1.0), Expr::constant(-1.0), 0.0};
  Grid g{0.0, 8.0, 512};
  OdeOptions opts;
  opts.rtol = 1e-9;
  opts.atol = 1e-12;
  ReducedSystem red = reduce(sys, g);
  auto fm = integrate_fundamental(sys, g, opts);

  std::vector<Complex> y(fm.ts.size()), dy(fm.ts.size());
  std::vector<Complex> u(fm.ts.size()), du(fm.ts.size());
  std::vector<Complex> w(fm.ts.size()), dw(fm.ts.size());
  for (std::size_t i = 0; i < fm.ts.size(); ++i) {
    double t = fm.ts[i];
    Complex phi = fm.phi[i].m11, psi = fm.phi[i].m21;
    Complex dphi = fm.phi_dot[i].m11, dpsi = fm.phi_dot[i].m21;
    REQUIRE(std::abs(phi) > 1e-9);
    y[i] = psi / phi;
    dy[i] = (dpsi * phi - psi * dphi) / (phi * phi);
    Complex b = eval(sys.b, t), a = eval(sys.a, t);
    Complex bp = eval(simplify(differentiate(sys.b)), t);
    u[i] = b * y[i] + a;
    du[i] = bp * y[i] + b * dy[i];
    Complex p1 = eval(red.P1, t);
    Complex p1p = eval(simplify(differentiate(red.P1)), t);
    w[i] = u[i] - 0.5 * p1;
    dw[i] = du[i] - 0.5 * p1p;
  }

  double r23 = 0, r28 = 0, r218 = 0;
  for (std::size_t i = 0; i + 1 < fm.ts.size(); ++i) {
    double h = fm.ts[i + 1] - fm.ts[i];
    double tm = fm.ts[i] + 0.5 * h;
    Complex b = eval(sys.b, tm), c = eval(sys.c, tm);
    Complex bigA = eval(red.A, tm);
    auto ym = hermite_midpoint(y[i], dy[i], y[i + 1], dy[i + 1], h);
    Complex res23 = ym.derivative + b * ym.value * ym.value + bigA * ym.value -
                    c;
    r23 = std::max(r23, std::abs(res23) /
                            (1.0 + std::abs(b) * std::norm(ym.value)));

    Complex p1 = eval(red.P1, tm), d1 = eval(red.D1, tm);
    auto um = hermite_midpoint(u[i], du[i], u[i + 1], du[i + 1], h);
    Complex res28 = um.derivative + um.value * um.value - p1 * um.value + d1;
    r28 = std::max(r28, std::abs(res28) / (1.0 + std::norm(um.value)));

    Complex g1 = eval(red.G1, tm);
    auto wm = hermite_midpoint(w[i], dw[i], w[i + 1], dw[i + 1], h);
    Complex res218 = wm.derivative + wm.value * wm.value + g1;
    r218 = std::max(r218, std::abs(res218) / (1.0 + std::norm(wm.value)));
  }
  CHECK(r23 < 1e-6);
  CHECK(r28 < 1e-6);
  CHECK(r218 < 1e-6);
}
