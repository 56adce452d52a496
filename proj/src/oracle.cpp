#include "ltvstab/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ltvstab/quadrature.hpp"
#include "rk45.hpp"

namespace ltvstab {

namespace {

constexpr double kOverflowGuard = 1e150;

Complex at(const detail::State<8>& s, int k) {
  return Complex(s[2 * k], s[2 * k + 1]);
}
void put(detail::State<8>& s, int k, Complex v) {
  s[2 * k] = v.real();
  s[2 * k + 1] = v.imag();
}

// state layout: m11, m12, m21, m22 as re/im pairs
struct FundamentalRhs {
  const SystemSpec* sys;
  void operator()(double t, const detail::State<8>& y,
                  detail::State<8>& dy) const {
    Complex a = eval(sys->a, t), b = eval(sys->b, t);
    Complex c = eval(sys->c, t), d = eval(sys->d, t);
    Complex m11 = at(y, 0), m12 = at(y, 1), m21 = at(y, 2), m22 = at(y, 3);
    put(dy, 0, a * m11 + b * m21);
    put(dy, 1, a * m12 + b * m22);
    put(dy, 2, c * m11 + d * m21);
    put(dy, 3, c * m12 + d * m22);
  }
};

Mat2c to_mat(const detail::State<8>& s) {
  return Mat2c{at(s, 0), at(s, 1), at(s, 2), at(s, 3)};
}

struct ScalarRhs {
  const ScalarEquation* eq;
  void operator()(double t, const detail::State<4>& y,
                  detail::State<4>& dy) const {
    Complex p = eval(eq->p, t), q = eval(eq->q, t);
    Complex phi(y[0], y[1]), dphi(y[2], y[3]);
    Complex ddphi = -p * dphi - q * phi;
    dy[0] = dphi.real();
    dy[1] = dphi.imag();
    dy[2] = ddphi.real();
    dy[3] = ddphi.imag();
  }
};

struct RiccatiRhs {
  RiccatiKind kind;
  const SystemSpec* sys;
  const ReducedSystem* red;
  void operator()(double t, const detail::State<2>& s,
                  detail::State<2>& ds) const {
    Complex y(s[0], s[1]);
    Complex dy;
    switch (kind) {
      case RiccatiKind::Eq23:
        dy = eval(sys->c, t) - eval(red->A, t) * y - eval(sys->b, t) * y * y;
        break;
      case RiccatiKind::Eq24:
        dy = eval(sys->a, t) + eval(red->A, t) * y - eval(sys->c, t) * y * y;
        break;
      case RiccatiKind::Eq28:
        dy = eval(red->P1, t) * y - eval(red->D1, t) - y * y;
        break;
      case RiccatiKind::Eq210:
        dy = eval(red->P2, t) * y - eval(red->D2, t) - y * y;
        break;
      case RiccatiKind::Eq218:
        dy = -y * y - eval(red->G1, t);
        break;
    }
    ds[0] = dy.real();
    ds[1] = dy.imag();
  }
};

}  // namespace

double Mat2c::max_abs() const {
  return std::max({std::abs(m11), std::abs(m12), std::abs(m21), std::abs(m22)});
}

double Mat2c::spectral_norm() const {
  double s = max_abs();
  if (s == 0.0) return 0.0;
  Complex a = m11 / s, b = m12 / s, c = m21 / s, d = m22 / s;
  // Hermitian A^H A = [[p, q],[conj q, r]]
  double p = std::norm(a) + std::norm(c);
  double r = std::norm(b) + std::norm(d);
  Complex q = std::conj(a) * b + std::conj(c) * d;
  double disc = std::sqrt(std::max(0.0, (p - r) * (p - r) + 4.0 * std::norm(q)));
  double lam = 0.5 * (p + r + disc);
  return s * std::sqrt(std::max(0.0, lam));
}

Mat2c operator*(const Mat2c& x, const Mat2c& y) {
  return Mat2c{x.m11 * y.m11 + x.m12 * y.m21, x.m11 * y.m12 + x.m12 * y.m22,
               x.m21 * y.m11 + x.m22 * y.m21, x.m21 * y.m12 + x.m22 * y.m22};
}

Mat2c operator-(const Mat2c& x, const Mat2c& y) {
  return Mat2c{x.m11 - y.m11, x.m12 - y.m12, x.m21 - y.m21, x.m22 - y.m22};
}

FundamentalMatrix integrate_fundamental(const SystemSpec& sys,
                                        const Grid& grid,
                                        const OdeOptions& opts) {
  grid.validate();
  auto ts = grid.times();
  detail::Rk45<8, FundamentalRhs> stepper(FundamentalRhs{&sys}, opts,
                                          grid.T - grid.t0);
  detail::State<8> y0{};
  put(y0, 0, Complex(1.0, 0.0));
  put(y0, 3, Complex(1.0, 0.0));
  stepper.set_state(ts[0], y0);

  FundamentalMatrix fm;
  fm.ts.reserve(ts.size());
  fm.phi.reserve(ts.size());
  fm.phi_dot.reserve(ts.size());
  fm.ts.push_back(ts[0]);
  fm.phi.push_back(to_mat(stepper.y()));
  fm.phi_dot.push_back(to_mat(stepper.f()));

  auto overflow = [](const detail::State<8>& s) {
    for (double v : s)
      if (!(std::abs(v) < kOverflowGuard)) return true;
    return false;
  };
  for (std::size_t i = 1; i < ts.size(); ++i) {
    double esc_t = 0.0;
    if (!stepper.advance_to_escape(ts[i], overflow, &esc_t)) {
      fm.truncated_at = esc_t;
      break;
    }
    fm.ts.push_back(ts[i]);
    fm.phi.push_back(to_mat(stepper.y()));
    fm.phi_dot.push_back(to_mat(stepper.f()));
  }
  return fm;
}

ScalarTrajectory integrate_scalar(const ScalarEquation& eq, Complex phi0,
                                  Complex dphi0, const Grid& grid,
                                  const OdeOptions& opts) {
  grid.validate();
  auto ts = grid.times();
  detail::Rk45<4, ScalarRhs> stepper(ScalarRhs{&eq}, opts, grid.T - grid.t0);
  stepper.set_state(ts[0],
                    {phi0.real(), phi0.imag(), dphi0.real(), dphi0.imag()});

  ScalarTrajectory tr;
  auto record = [&](double t) {
    const auto& y = stepper.y();
    const auto& f = stepper.f();
    tr.ts.push_back(t);
    tr.phi.emplace_back(y[0], y[1]);
    tr.dphi.emplace_back(y[2], y[3]);
    tr.phi_dot.emplace_back(f[0], f[1]);
    tr.dphi_dot.emplace_back(f[2], f[3]);
  };
  record(ts[0]);
  for (std::size_t i = 1; i < ts.size(); ++i) {
    stepper.advance_to(ts[i]);
    record(ts[i]);
  }
  return tr;
}

RiccatiTrajectory integrate_riccati(RiccatiKind kind, const SystemSpec& sys,
                                    const ReducedSystem& red, Complex y0,
                                    const Grid& grid, const OdeOptions& opts,
                                    double escape_radius) {
  grid.validate();
  auto ts = grid.times();
  detail::Rk45<2, RiccatiRhs> stepper(RiccatiRhs{kind, &sys, &red}, opts,
                                      grid.T - grid.t0);
  stepper.set_state(ts[0], {y0.real(), y0.imag()});

  RiccatiTrajectory tr;
  auto record = [&](double t) {
    tr.ts.push_back(t);
    tr.ys.emplace_back(stepper.y()[0], stepper.y()[1]);
    tr.dys.emplace_back(stepper.f()[0], stepper.f()[1]);
  };
  auto escaped = [escape_radius](const detail::State<2>& s) {
    double m = std::hypot(s[0], s[1]);
    return !(m < escape_radius);
  };
  if (escaped({y0.real(), y0.imag()})) {
    tr.blow_up_at = ts[0];
    return tr;
  }
  record(ts[0]);
  for (std::size_t i = 1; i < ts.size(); ++i) {
    double esc_t = 0.0;
    if (!stepper.advance_to_escape(ts[i], escaped, &esc_t)) {
      tr.blow_up_at = esc_t;
      break;
    }
    record(ts[i]);
  }
  return tr;
}

namespace {

// Cumulative integral of Hermite cubics through sampled values and their
// stored derivatives: h/2 (y0+y1) + h^2/12 (f0-f1) per interval.
std::vector<Complex> cumulative_hermite(const std::vector<double>& ts,
                                        const std::vector<Complex>& ys,
                                        const std::vector<Complex>& fs) {
  std::vector<Complex> out(ts.size());
  for (std::size_t i = 1; i < ts.size(); ++i) {
    double h = ts[i] - ts[i - 1];
    out[i] = out[i - 1] + 0.5 * h * (ys[i - 1] + ys[i]) +
             h * h / 12.0 * (fs[i - 1] - fs[i]);
  }
  return out;
}

}  // namespace

SolutionPair reconstruct_solution(const SystemSpec& sys,
                                  const RiccatiTrajectory& u,
                                  const RiccatiTrajectory& v, Complex phi1,
                                  Complex psi1, double coupling_tol) {
  if (u.ts.empty() || v.ts.empty())
    throw CouplingError("empty Riccati trajectory");
  std::size_t n = std::min(u.ts.size(), v.ts.size());
  double t1 = u.ts.front();

  Complex a1 = eval(sys.a, t1), d1 = eval(sys.d, t1);
  Complex b1 = eval(sys.b, t1);
  Complex bc = b1 * eval(sys.c, t1);
  Complex lhs = (u.ys.front() - a1) * (v.ys.front() - d1);
  if (std::abs(lhs - bc) > coupling_tol * (1.0 + std::abs(bc)))
    throw CouplingError(
        "initial data violates the coupling constraint "
        "(u(t1)-a(t1))(v(t1)-d(t1)) = b(t1)c(t1): |difference| = " +
        std::to_string(std::abs(lhs - bc)));
  // The correspondence psi = y phi pins the initial ratio as well:
  // psi(t1)/phi(t1) = y(t1) = (u(t1) - a(t1))/b(t1).
  Complex y1 = (u.ys.front() - a1) / b1;
  if (std::abs(psi1 - y1 * phi1) >
      coupling_tol * (1.0 + std::abs(y1 * phi1)))
    throw CouplingError(
        "initial values must satisfy psi(t1) = y(t1) phi(t1) with "
        "y(t1) = (u(t1)-a(t1))/b(t1); |difference| = " +
        std::to_string(std::abs(psi1 - y1 * phi1)));

  std::vector<double> ts(u.ts.begin(), u.ts.begin() + n);
  std::vector<Complex> us(u.ys.begin(), u.ys.begin() + n);
  std::vector<Complex> dus(u.dys.begin(), u.dys.begin() + n);
  std::vector<Complex> vs(v.ys.begin(), v.ys.begin() + n);
  std::vector<Complex> dvs(v.dys.begin(), v.dys.begin() + n);

  auto U = cumulative_hermite(ts, us, dus);
  auto V = cumulative_hermite(ts, vs, dvs);

  SolutionPair sp;
  sp.ts = ts;
  sp.phi.resize(n);
  sp.psi.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    sp.phi[i] = phi1 * std::exp(U[i]);
    sp.psi[i] = psi1 * std::exp(V[i]);
  }
  return sp;
}

std::string to_string(GrowthClass g) {
  switch (g) {
    case GrowthClass::Vanishing: return "Vanishing";
    case GrowthClass::Bounded: return "Bounded";
    case GrowthClass::Unbounded: return "Unbounded";
    case GrowthClass::Ambiguous: return "Ambiguous";
  }
  return "Ambiguous";
}

namespace {

struct TailFit {
  double slope = 0.0;
  double tail_log_min = 0.0, tail_log_max = 0.0;
  double tail_max_value = 0.0;
};

TailFit fit_tail(const std::vector<double>& ts, const std::vector<double>& ms,
                 std::size_t count) {
  std::size_t n = count;
  std::size_t k = std::max<std::size_t>(16, n / 4);
  if (k > n) k = n;
  std::size_t b = n - k;
  TailFit f;
  f.tail_log_min = std::numeric_limits<double>::infinity();
  f.tail_log_max = -f.tail_log_min;
  double st = 0, sv = 0, stt = 0, stv = 0;
  for (std::size_t i = b; i < n; ++i) {
    double lv = std::log(std::max(ms[i], 1e-300));
    f.tail_log_min = std::min(f.tail_log_min, lv);
    f.tail_log_max = std::max(f.tail_log_max, lv);
    f.tail_max_value = std::max(f.tail_max_value, ms[i]);
    st += ts[i];
    sv += lv;
    stt += ts[i] * ts[i];
    stv += ts[i] * lv;
  }
  double m = static_cast<double>(k);
  double den = stt - st * st / m;
  f.slope = den > 0 ? (stv - st * sv / m) / den : 0.0;
  return f;
}

GrowthClass classify_tail(const std::vector<double>& ts,
                          const std::vector<double>& ms, std::size_t count,
                          const EmpiricalTols& tols, double* slope_out) {
  TailFit f = fit_tail(ts, ms, count);
  if (slope_out) *slope_out = f.slope;
  if (f.tail_max_value < tols.vanish_tol && f.slope < 0.0)
    return GrowthClass::Vanishing;
  if (f.tail_log_min > tols.lambda && f.slope > tols.slope_tol)
    return GrowthClass::Unbounded;
  bool in_band = true;
  for (std::size_t i = 0; i < count; ++i)
    if (!(ms[i] >= tols.vanish_tol && ms[i] <= tols.bound_cap)) in_band = false;
  if (in_band && std::abs(f.slope) < tols.slope_tol) return GrowthClass::Bounded;
  return GrowthClass::Ambiguous;
}

}  // namespace

EmpiricalClass empirical_classify(const SystemSpec& sys, const Grid& grid,
                                  int horizon_doublings, const OdeOptions& opts,
                                  const EmpiricalTols& tols) {
  Grid top = grid;
  for (int k = 0; k < horizon_doublings; ++k) top = top.doubled();
  FundamentalMatrix fm = integrate_fundamental(sys, top, opts);

  std::vector<double> ms(fm.phi.size());
  for (std::size_t i = 0; i < fm.phi.size(); ++i)
    ms[i] = fm.phi[i].spectral_norm();

  EmpiricalClass out;
  if (fm.truncated_at) {  // norm hit the overflow guard: growth is decisive
    out.cls = GrowthClass::Unbounded;
    TailFit f = fit_tail(fm.ts, ms, ms.size());
    out.growth_exponent = f.slope;
    return out;
  }

  GrowthClass top_cls =
      classify_tail(fm.ts, ms, ms.size(), tols, &out.growth_exponent);
  if (horizon_doublings > 0) {
    std::size_t half = (ms.size() + 1) / 2;  // doubling preserves spacing
    GrowthClass prev_cls = classify_tail(fm.ts, ms, half, tols, nullptr);
    if (prev_cls != top_cls) {
      out.cls = GrowthClass::Ambiguous;
      return out;
    }
  }
  out.cls = top_cls;
  return out;
}

double liouville_max_residual(const FundamentalMatrix& fm,
                              const SystemSpec& sys, double quad_tol) {
  if (fm.ts.empty()) return 0.0;
  Expr S = simplify(sys.a + sys.d);
  auto f = [&](double t) { return eval(S, t); };
  auto intS = cumulative_integral<Complex>(f, fm.ts, quad_tol);
  double worst = 0.0;
  for (std::size_t i = 0; i < fm.ts.size(); ++i) {
    Complex expected = std::exp(intS[i]);
    double denom = std::abs(expected);
    double r = std::abs(fm.phi[i].det() - expected) / denom;
    worst = std::max(worst, r);
  }
  return worst;
}

HermiteMid hermite_midpoint(Complex y0, Complex f0, Complex y1, Complex f1,
                            double h) {
  HermiteMid m;
  m.value = 0.5 * (y0 + y1) + h / 8.0 * (f0 - f1);
  m.derivative = 1.5 * (y1 - y0) / h - 0.25 * (f0 + f1);
  return m;
}

}  // namespace ltvstab
