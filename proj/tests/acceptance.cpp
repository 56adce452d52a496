// Acceptance suite: one numbered check per shipped guarantee, each printing a
// single pass/fail line. Run all with no arguments or one with
// --criterion N. Exits nonzero when any selected check fails.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "ltvstab/app.hpp"
#include "ltvstab/criteria.hpp"
#include "ltvstab/oracle.hpp"
#include "ltvstab/report.hpp"
#include "testutil.hpp"

#ifndef LTVSTAB_BIN_PATH
#define LTVSTAB_BIN_PATH "./ltvstab"
#endif
#ifndef LTVSTAB_SOURCE_DIR
#define LTVSTAB_SOURCE_DIR "."
#endif

using namespace ltvstab;

namespace {

struct Checker {
  std::vector<std::string> failures;
  void expect(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
  bool passed() const { return failures.empty(); }
};

SystemSpec constant_system(double a, double b, double c, double d) {
  return SystemSpec{Expr::constant(a), Expr::constant(b), Expr::constant(c),
                    Expr::constant(d), 0.0};
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                       start)
      .count();
}

// ---------------------------------------------------------------------------
// random smooth coefficient expressions for the correspondence checks:
// degree <= 3 polynomials in (sin t, cos t, t), rescaled into [-2, 2] on the
// window, with b and c bounded away from zero.

Expr random_poly_expr(std::mt19937& rng, double window_end) {
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  Expr s = Expr::sin(Expr::var());
  Expr c = Expr::cos(Expr::var());
  Expr t = Expr::var();
  std::vector<Expr> monomials{Expr::constant(1.0)};
  std::vector<Expr> gens{s, c, t};
  for (std::size_t i = 0; i < gens.size(); ++i)
    for (std::size_t j = i; j < gens.size(); ++j) {
      monomials.push_back(gens[i] * gens[j]);
      for (std::size_t k = j; k < gens.size(); ++k)
        monomials.push_back(gens[i] * gens[j] * gens[k]);
    }
  monomials.insert(monomials.end(), gens.begin(), gens.end());

  Expr acc = Expr::constant(0.0);
  for (const Expr& m : monomials) acc = acc + Expr::constant(coef(rng)) * m;
  acc = simplify(acc);

  double mx = 0.0;
  for (int i = 0; i <= 200; ++i) {
    double tt = window_end * i / 200.0;
    mx = std::max(mx, std::abs(eval(acc, tt)));
  }
  if (mx < 1e-6) return Expr::constant(0.1);
  return simplify(Expr::constant(1.5 / mx) * acc);
}

Expr random_bounded_away(std::mt19937& rng, double window_end) {
  // sigma (0.3 + 0.75 p^2) with p in [-1.5, 1.5]: magnitude in [0.3, 1.99]
  Expr p = random_poly_expr(rng, window_end);
  std::uniform_int_distribution<int> sign(0, 1);
  Expr base = Expr::constant(0.3) + Expr::constant(0.75) * Expr::pow(p, 2.0);
  return sign(rng) ? simplify(base) : simplify(-base);
}

struct ChainSample {
  std::vector<double> ts;
  std::vector<Complex> y, dy, u, du, w, dw;
};

// Samples of the y -> u -> w substitution chain along an integrated
// y-Riccati trajectory, stopping 0.1 before any blow-up.
ChainSample build_chain(const SystemSpec& sys, const ReducedSystem& red,
                        const RiccatiTrajectory& y_traj) {
  ChainSample ch;
  Expr bp = simplify(differentiate(sys.b));
  Expr ap = simplify(differentiate(sys.a));
  Expr p1p = simplify(differentiate(red.P1));
  double cutoff = y_traj.blow_up_at ? *y_traj.blow_up_at - 0.1 : 1e300;
  for (std::size_t i = 0; i < y_traj.ts.size(); ++i) {
    double t = y_traj.ts[i];
    if (t >= cutoff) break;
    Complex y = y_traj.ys[i], dy = y_traj.dys[i];
    Complex b = eval(sys.b, t), a = eval(sys.a, t);
    Complex u = b * y + a;
    Complex du = eval(bp, t) * y + b * dy + eval(ap, t);
    Complex p1 = eval(red.P1, t);
    ch.ts.push_back(t);
    ch.y.push_back(y);
    ch.dy.push_back(dy);
    ch.u.push_back(u);
    ch.du.push_back(du);
    ch.w.push_back(u - 0.5 * p1);
    ch.dw.push_back(du - 0.5 * eval(p1p, t));
  }
  return ch;
}

struct ChainResiduals {
  double r23 = 0, r28 = 0, r218 = 0;
};

ChainResiduals chain_residuals(const SystemSpec& sys, const ReducedSystem& red,
                               const ChainSample& ch) {
  ChainResiduals r;
  for (std::size_t i = 0; i + 1 < ch.ts.size(); ++i) {
    double h = ch.ts[i + 1] - ch.ts[i];
    double tm = ch.ts[i] + 0.5 * h;
    Complex b = eval(sys.b, tm), c = eval(sys.c, tm);
    Complex bigA = eval(red.A, tm);

    auto ym = hermite_midpoint(ch.y[i], ch.dy[i], ch.y[i + 1], ch.dy[i + 1], h);
    Complex res23 =
        ym.derivative + b * ym.value * ym.value + bigA * ym.value - c;
    r.r23 = std::max(r.r23, std::abs(res23) /
                               (1.0 + std::abs(b) * std::norm(ym.value)));

    Complex p1 = eval(red.P1, tm), d1 = eval(red.D1, tm);
    auto um = hermite_midpoint(ch.u[i], ch.du[i], ch.u[i + 1], ch.du[i + 1], h);
    Complex res28 = um.derivative + um.value * um.value - p1 * um.value + d1;
    r.r28 = std::max(r.r28, std::abs(res28) / (1.0 + std::norm(um.value)));

    Complex g1 = eval(red.G1, tm);
    auto wm = hermite_midpoint(ch.w[i], ch.dw[i], ch.w[i + 1], ch.dw[i + 1], h);
    Complex res218 = wm.derivative + wm.value * wm.value + g1;
    r.r218 = std::max(r.r218, std::abs(res218) / (1.0 + std::norm(wm.value)));
  }
  return r;
}

std::string config_path(const char* name) {
  return std::string(LTVSTAB_SOURCE_DIR) + "/configs/" + name;
}

// ---------------------------------------------------------------------------
// criterion 1: Routh-Hurwitz agreement over random real constant systems

bool criterion1(Checker& ck) {
  auto start = std::chrono::steady_clock::now();
  std::mt19937 rng(20260808);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  Grid grid{0.0, 60.0, 256};
  CriterionConfig cfg;

  int tested = 0, inconclusive = 0, disagreements = 0;
  while (tested < 200) {
    double a = u(rng), b = u(rng), c = u(rng), d = u(rng);
    double tr = a + d, det = a * d - b * c;
    if (std::abs(tr) <= 0.1 || std::abs(det) <= 0.1) continue;
    if (b == 0.0 || c == 0.0) continue;
    ++tested;
    Verdict v = classify(constant_system(a, b, c, d), grid, cfg);
    if (v.classification == Classification::Inconclusive) {
      ++inconclusive;
      continue;
    }
    Complex disc = std::sqrt(Complex(tr * tr - 4.0 * det, 0.0));
    double remax = std::max((Complex(tr, 0.0) + disc).real(),
                            (Complex(tr, 0.0) - disc).real()) /
                   2.0;
    Classification want = remax < 0.0 ? Classification::AsymptoticallyStable
                                      : Classification::NotStable;
    if (v.classification != want) ++disagreements;
  }
  ck.expect(disagreements == 0, "eigenvalue test disagreements: " +
                                    std::to_string(disagreements));
  ck.expect(inconclusive * 10 < tested,
            "inconclusive rate >= 10%: " + std::to_string(inconclusive) +
                "/" + std::to_string(tested));
  double secs = seconds_since(start);
  ck.expect(secs < 60.0, "runtime " + std::to_string(secs) + "s >= 60s");
  return ck.passed();
}

// ---------------------------------------------------------------------------
// criterion 2: scalar sanity for the three reference equations

bool criterion2(Checker& ck) {
  auto start = std::chrono::steady_clock::now();
  // Horizon long enough that e^t growth clears the divergence threshold on
  // the pre-doubling horizon as well.
  Grid grid{0.0, 60.0, 256};
  CriterionConfig cfg;
  OdeOptions opts;

  auto oracle_class = [&](const ScalarEquation& eq) {
    SystemSpec companion{Expr::constant(0.0), Expr::constant(1.0),
                         simplify(-eq.q), simplify(-eq.p), eq.t0};
    return empirical_classify(companion, grid, 1, opts).cls;
  };

  {
    ScalarEquation eq{Expr::constant(0.0), Expr::constant(1.0), 0.0};
    Verdict v = classify_scalar(eq, grid, cfg);
    ck.expect(v.classification == Classification::LyapunovStable,
              "phi''+phi=0 not LyapunovStable");
    ck.expect(oracle_class(eq) == GrowthClass::Bounded,
              "phi''+phi=0 oracle not Bounded");
  }
  {
    ScalarEquation eq{Expr::constant(2.0), Expr::constant(2.0), 0.0};
    Verdict v = classify_scalar(eq, grid, cfg);
    ck.expect(v.classification == Classification::AsymptoticallyStable,
              "phi''+2phi'+2phi=0 not AsymptoticallyStable");
    ck.expect(oracle_class(eq) == GrowthClass::Vanishing,
              "phi''+2phi'+2phi=0 oracle not Vanishing");
  }
  {
    ScalarEquation eq{Expr::constant(0.0), Expr::constant(-1.0), 0.0};
    Verdict v = classify_scalar(eq, grid, cfg);
    ck.expect(v.classification == Classification::NotStable,
              "phi''-phi=0 not NotStable");
    ck.expect(oracle_class(eq) == GrowthClass::Unbounded,
              "phi''-phi=0 oracle not Unbounded");
  }
  double secs = seconds_since(start);
  ck.expect(secs < 5.0, "runtime " + std::to_string(secs) + "s >= 5s");
  return ck.passed();
}

// ---------------------------------------------------------------------------
// criterion 3: correspondence identities along 25 random smooth systems

bool criterion3(Checker& ck) {
  std::mt19937 rng(31415);
  // Dense sampling keeps the Hermite midpoint defect h^4 |y^(5)|/1920 well
  // below the residual tolerance even where the Riccati solutions move fast.
  Grid grid{0.0, 5.0, 16385};
  OdeOptions opts;
  opts.rtol = 1e-8;
  opts.atol = 1e-11;

  for (int sysno = 0; sysno < 25; ++sysno) {
    SystemSpec sys{random_poly_expr(rng, 5.0), random_bounded_away(rng, 5.0),
                   random_bounded_away(rng, 5.0), random_poly_expr(rng, 5.0),
                   0.0};
    ReducedSystem red = reduce(sys, grid, 1e-8);
    std::string tag = "system " + std::to_string(sysno) + ": ";

    // substitution chain from a real and a complex start
    for (Complex y0 : {Complex(0.7, 0.0), Complex(0.0, 1.0)}) {
      auto y_traj =
          integrate_riccati(RiccatiKind::Eq23, sys, red, y0, grid, opts);
      ChainSample ch = build_chain(sys, red, y_traj);
      if (ch.ts.size() < 3) continue;  // immediate blow-up: nothing to check
      ChainResiduals r = chain_residuals(sys, red, ch);
      ck.expect(r.r23 < 1e-6, tag + "(2.3) residual " + std::to_string(r.r23));
      ck.expect(r.r28 < 1e-6, tag + "(2.8) residual " + std::to_string(r.r28));
      ck.expect(r.r218 < 1e-6,
                tag + "(2.18) residual " + std::to_string(r.r218));
    }

    // Lemma 2.1 reconstruction with a coupling-consistent complex start
    Complex a0 = eval(sys.a, 0.0), d0 = eval(sys.d, 0.0);
    Complex bc0 = eval(sys.b, 0.0) * eval(sys.c, 0.0);
    Complex u0 = a0 + Complex(0.0, 1.0);
    Complex v0 = bc0 / (u0 - a0) + d0;
    auto u_traj = integrate_riccati(RiccatiKind::Eq28, sys, red, u0, grid, opts);
    auto v_traj =
        integrate_riccati(RiccatiKind::Eq210, sys, red, v0, grid, opts);
    ck.expect(!u_traj.blow_up_at.has_value(),
              tag + "u-trajectory blow-up despite the complex shift");
    ck.expect(!v_traj.blow_up_at.has_value(),
              tag + "v-trajectory blow-up despite the complex shift");
    if (u_traj.blow_up_at || v_traj.blow_up_at) continue;

    Complex phi1{1.0, 0.0};
    Complex psi1 = (u0 - a0) / eval(sys.b, 0.0) * phi1;  // psi = y phi at t0
    SolutionPair sp =
        reconstruct_solution(sys, u_traj, v_traj, phi1, psi1);
    double worst = 0.0;
    for (std::size_t i = 0; i < sp.ts.size(); ++i) {
      double t = sp.ts[i];
      Complex a = eval(sys.a, t), b = eval(sys.b, t);
      Complex c = eval(sys.c, t), d = eval(sys.d, t);
      Complex r1 = u_traj.ys[i] * sp.phi[i] - (a * sp.phi[i] + b * sp.psi[i]);
      Complex r2 = v_traj.ys[i] * sp.psi[i] - (c * sp.phi[i] + d * sp.psi[i]);
      double scale = 1.0 + std::abs(sp.phi[i]) + std::abs(sp.psi[i]);
      worst = std::max(worst, std::abs(r1) / scale);
      worst = std::max(worst, std::abs(r2) / scale);
    }
    ck.expect(worst < 1e-6, tag + "reconstruction residual " +
                                std::to_string(worst));
  }
  return ck.passed();
}

// ---------------------------------------------------------------------------
// criterion 4: Liouville identity on every integrated system

bool criterion4(Checker& ck) {
  OdeOptions opts;
  // Horizons stay inside the double-precision conditioning window of the
  // determinant (relative det error grows like machine-epsilon times
  // exp(eigenvalue-spread times t), whatever the integrator does).
  struct Item {
    SystemSpec sys;
    double T;
    std::string name;
  };
  std::vector<Item> items;
  items.push_back({constant_system(-1, 1, -1, -1), 20.0, "constant"});
  items.push_back({constant_system(0, 1, -1, 0), 60.0, "rotation"});
  items.push_back({constant_system(1, 1, 1, 1), 10.0, "saddle"});
  items.push_back({SystemSpec{Expr::constant(0.0), Expr::constant(1.0),
                              parse_expr("-1/(1+t)^4"), Expr::constant(0.0),
                              0.0},
                   60.0, "algebraic decay"});
  items.push_back({SystemSpec{Expr::constant(0.0), Expr::constant(1.0),
                              parse_expr("-1 - 0.9*exp(-t)*sin(5*t)"),
                              Expr::constant(0.0), 0.0},
                   60.0, "perturbed oscillator"});
  items.push_back({SystemSpec{Expr::constant(-1.0), parse_expr("2 + sin(t)"),
                              Expr::constant(1.0), Expr::constant(-1.0), 0.0},
                   6.0, "bounded b"});
  std::mt19937 rng(777);
  for (int k = 0; k < 5; ++k)
    items.push_back({SystemSpec{random_poly_expr(rng, 5.0),
                                random_bounded_away(rng, 5.0),
                                random_bounded_away(rng, 5.0),
                                random_poly_expr(rng, 5.0), 0.0},
                     5.0, "random " + std::to_string(k)});

  for (const Item& it : items) {
    Grid g{0.0, it.T, 256};
    auto fm = integrate_fundamental(it.sys, g, opts);
    double r = liouville_max_residual(fm, it.sys);
    ck.expect(r <= 1e-5,
              it.name + ": max |det Phi - exp int S| / exp int Re S = " +
                  std::to_string(r));
  }
  return ck.passed();
}

// ---------------------------------------------------------------------------
// criterion 5: the case-I exemplar decided by Theorem 3.1

bool criterion5(Checker& ck) {
  Grid grid{0.0, 60.0, 1024};
  CriterionConfig cfg;
  SystemSpec sys = constant_system(0, 1, -1, 0);

  Verdict v = classify(sys, grid, cfg);
  ck.expect(v.classification == Classification::LyapunovStable,
            "verdict is not LyapunovStable");
  ck.expect(v.decided_by == TheoremId::T3_1, "not decided by Theorem 3.1");
  bool found31 = false;
  for (const ConditionReport& rep : v.reports) {
    if (rep.theorem != TheoremId::T3_1) continue;
    found31 = true;
    for (const auto& [label, outcome] : rep.conditions)
      ck.expect(outcome.status == ConditionStatus::Holds,
                "condition " + label + " does not hold");
  }
  ck.expect(found31, "no Theorem 3.1 report present");

  Grid analysis = grid.doubled();
  ReducedSystem red = reduce(sys, analysis);
  for (FunctionalKind k : {FunctionalKind::T31a, FunctionalKind::T31b}) {
    Trace tr = functional_trace(k, red, analysis, cfg);
    double mx = 0.0;
    for (double x : tr.vs) mx = std::max(mx, std::abs(x));
    ck.expect(mx < 1e-9, "functional trace not identically zero: max |.| = " +
                             std::to_string(mx));
  }

  EmpiricalClass oc = empirical_classify(sys, grid, 1, OdeOptions{});
  ck.expect(oc.cls == GrowthClass::Bounded, "oracle class is not Bounded");
  return ck.passed();
}

// ---------------------------------------------------------------------------
// criterion 6: the bounded-b exemplar at horizon 50 with doubling to 100

bool criterion6(Checker& ck) {
  Grid grid{0.0, 50.0, 1024};
  CriterionConfig cfg;
  SystemSpec sys{Expr::constant(-1.0), parse_expr("2 + sin(t)"),
                 Expr::constant(1.0), Expr::constant(-1.0), 0.0};

  Grid analysis = grid.doubled();
  ReducedSystem red = reduce(sys, analysis);
  ConditionReport rep =
      check_theorem_conditions(TheoremId::T3_4, red, sys, grid, cfg);
  int rows = 0;
  for (const auto& [label, outcome] : rep.conditions) {
    if (label.rfind("8:", 0) == 0) {
      ++rows;
      ck.expect(outcome.status == ConditionStatus::Holds,
                "condition " + label + " does not hold");
    }
  }
  ck.expect(rows == 3, "expected three condition 8 rows");

  Verdict v = classify(sys, grid, cfg);
  EmpiricalClass oc = empirical_classify(sys, grid, 1, OdeOptions{});
  bool agrees = v.classification == Classification::Inconclusive ||
                oc.cls == GrowthClass::Ambiguous ||
                compatible(v.classification, oc.cls);
  ck.expect(agrees, "verdict " + to_string(v.classification) +
                        " conflicts with oracle class " + to_string(oc.cls));

  std::ostringstream out, err;
  int rc = run_compare(config_path("bounded_b_oscillating.cfg"), {}, out, err);
  ck.expect(rc == 0, "cmd_compare exited " + std::to_string(rc));
  return ck.passed();
}

// ---------------------------------------------------------------------------
// criterion 7: symbolic derivative vs central finite differences

bool criterion7(Checker& ck) {
  std::mt19937 rng(987654);
  int tested = 0, failures = 0;
  while (tested < 500) {
    Expr e = testutil::random_expr(rng, 6);
    auto t = testutil::usable_probe(e, rng);
    if (!t) continue;
    Expr de = differentiate(e);
    Complex sym;
    try {
      sym = eval(de, *t);
    } catch (const EvalError&) {
      continue;  // derivative pole exactly at the probe point
    }
    if (std::abs(sym) > 1e5) continue;
    ++tested;
    Complex fd = testutil::central_fd(e, *t);
    if (!(std::abs(sym - fd) <= 1e-5 * (1.0 + std::abs(sym)))) ++failures;
  }
  ck.expect(failures == 0,
            std::to_string(failures) + " derivative mismatches out of 500");
  return ck.passed();
}

// ---------------------------------------------------------------------------
// criterion 8: no verdict class flips between horizons T and 2T

bool criterion8(Checker& ck) {
  const char* names[] = {"constant.cfg",
                         "case1_rotation.cfg",
                         "case2_algebraic_decay.cfg",
                         "case3_saddle.cfg",
                         "case45_perturbed_oscillator.cfg",
                         "bounded_b_oscillating.cfg"};
  for (const char* name : names) {
    JobConfig jc = load_job_config(config_path(name));
    SystemSpec sys = jc.system();
    Verdict at_T = classify(sys, jc.grid, jc.tol);
    Grid doubled = jc.grid.doubled();
    Verdict at_2T = classify(sys, doubled, jc.tol);
    bool flip = at_T.classification != at_2T.classification &&
                at_T.classification != Classification::Inconclusive &&
                at_2T.classification != Classification::Inconclusive;
    ck.expect(!flip, std::string(name) + ": verdict flipped " +
                         to_string(at_T.classification) + " -> " +
                         to_string(at_2T.classification));
  }
  return ck.passed();
}

// ---------------------------------------------------------------------------
// criterion 9: golden-file CLI contract via the real binary

bool criterion9(Checker& ck) {
  const char* names[] = {"constant", "case1_rotation", "case2_algebraic_decay",
                         "case3_saddle", "case45_perturbed_oscillator"};
  for (const char* name : names) {
    std::string cmd = std::string(LTVSTAB_BIN_PATH) + " analyze --config " +
                      config_path((std::string(name) + ".cfg").c_str()) +
                      " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) {
      ck.expect(false, std::string(name) + ": failed to launch the CLI");
      continue;
    }
    std::string got;
    char buf[4096];
    std::size_t nread;
    while ((nread = fread(buf, 1, sizeof buf, pipe)) > 0)
      got.append(buf, nread);
    int status = pclose(pipe);
    ck.expect(status == 0,
              std::string(name) + ": CLI exit status " + std::to_string(status));

    std::ifstream gf(std::string(LTVSTAB_SOURCE_DIR) + "/tests/golden/" +
                         name + ".json",
                     std::ios::binary);
    if (!gf) {
      ck.expect(false, std::string(name) + ": missing golden file");
      continue;
    }
    std::stringstream ss;
    ss << gf.rdbuf();
    ck.expect(got == ss.str(),
              std::string(name) + ": report differs from the golden file");
  }
  return ck.passed();
}

struct Entry {
  int number;
  const char* description;
  std::function<bool(Checker&)> fn;
};

const Entry kCriteria[] = {
    {1, "Routh-Hurwitz agreement on 200 random real constant systems",
     criterion1},
    {2, "scalar stability sanity for the three reference equations",
     criterion2},
    {3, "correspondence identities along 25 random smooth systems",
     criterion3},
    {4, "Liouville identity on every integrated system", criterion4},
    {5, "case-I exemplar decided by Theorem 3.1 with zero functionals",
     criterion5},
    {6, "bounded-b exemplar: condition 8 holds and compare exits 0",
     criterion6},
    {7, "symbolic derivatives match central finite differences (500 trees)",
     criterion7},
    {8, "verdict classes stable under horizon doubling", criterion8},
    {9, "golden-file CLI contract on the committed configs", criterion9},
};

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    std::string arg = argv[i];
    if (arg == "--criterion" && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else {
      std::cerr << "usage: acceptance [--criterion N]\n";
      return 2;
    }
  }

  int failed = 0;
  for (const Entry& e : kCriteria) {
    if (only != 0 && e.number != only) continue;
    Checker ck;
    bool ok = false;
    std::string blowup;
    try {
      ok = e.fn(ck);
    } catch (const std::exception& ex) {
      blowup = ex.what();
    }
    if (ok) {
      std::printf("PASS criterion %d: %s\n", e.number, e.description);
    } else {
      ++failed;
      std::printf("FAIL criterion %d: %s\n", e.number, e.description);
      if (!blowup.empty()) std::printf("     exception: %s\n", blowup.c_str());
      for (const std::string& f : ck.failures)
        std::printf("     %s\n", f.c_str());
    }
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
