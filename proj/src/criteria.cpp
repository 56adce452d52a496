#include "ltvstab/criteria.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "ltvstab/quadrature.hpp"

namespace ltvstab {

std::string to_string(TheoremId id) {
  switch (id) {
    case TheoremId::T2_1: return "2.1";
    case TheoremId::T2_2: return "2.2";
    case TheoremId::T2_3: return "2.3";
    case TheoremId::T2_4: return "2.4";
    case TheoremId::C2_1: return "Corollary2.1";
    case TheoremId::T3_1: return "3.1";
    case TheoremId::T3_2: return "3.2";
    case TheoremId::T3_3: return "3.3";
    case TheoremId::T3_4: return "3.4";
    case TheoremId::T3_5: return "3.5";
    case TheoremId::RouthHurwitz: return "RouthHurwitz";
    case TheoremId::None: return "None";
  }
  return "None";
}

std::string to_string(SignCase c) {
  switch (c) {
    case SignCase::I: return "I";
    case SignCase::II: return "II";
    case SignCase::III: return "III";
    case SignCase::IV: return "IV";
    case SignCase::V: return "V";
    case SignCase::VI: return "VI";
    case SignCase::Zero: return "zero";
    case SignCase::Indefinite: return "indefinite";
  }
  return "indefinite";
}

std::string to_string(Classification c) {
  switch (c) {
    case Classification::AsymptoticallyStable: return "AsymptoticallyStable";
    case Classification::LyapunovStable: return "LyapunovStable";
    case Classification::NotStable: return "NotStable";
    case Classification::Inconclusive: return "Inconclusive";
  }
  return "Inconclusive";
}

// ---------------------------------------------------------------------------
// tail-trend analysis

namespace {

LimitEstimate estimate_prefix(const Trace& tr, std::size_t count,
                              const CriterionConfig& cfg) {
  if (count < 64 || tr.ts.size() < count)
    throw PreconditionError("trend analysis needs at least 64 samples");
  LimitEstimate est;
  std::size_t k = std::max<std::size_t>(16, count / 4);
  std::size_t b = count - k;

  est.trace_max = -std::numeric_limits<double>::infinity();
  est.trace_min = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < count; ++i) {
    est.trace_max = std::max(est.trace_max, tr.vs[i]);
    est.trace_min = std::min(est.trace_min, tr.vs[i]);
  }

  double st = 0, sv = 0, stt = 0, stv = 0;
  est.tail_min = std::numeric_limits<double>::infinity();
  est.tail_max = -est.tail_min;
  for (std::size_t i = b; i < count; ++i) {
    st += tr.ts[i];
    sv += tr.vs[i];
    stt += tr.ts[i] * tr.ts[i];
    stv += tr.ts[i] * tr.vs[i];
    est.tail_min = std::min(est.tail_min, tr.vs[i]);
    est.tail_max = std::max(est.tail_max, tr.vs[i]);
  }
  double m = static_cast<double>(k);
  double den = stt - st * st / m;
  double slope = den > 0 ? (stv - st * sv / m) / den : 0.0;
  double intercept = (sv - slope * st) / m;
  est.slope = slope;

  double mean = sv / m;
  double scale = 1.0 + std::abs(mean);
  double osc = 0.0;
  for (std::size_t i = b; i < count; ++i)
    osc = std::max(osc, std::abs(tr.vs[i] - (intercept + slope * tr.ts[i])));
  double drift = std::abs(slope) * (tr.ts[count - 1] - tr.ts[b]);

  if (est.tail_min > cfg.lambda && slope > cfg.tol_trend) {
    est.kind = LimitEstimate::Kind::DivergesPlus;
  } else if (est.tail_max < -cfg.lambda && slope < -cfg.tol_trend) {
    est.kind = LimitEstimate::Kind::DivergesMinus;
  } else if (osc <= cfg.tol_trend * scale && drift <= cfg.tol_trend * scale) {
    est.kind = LimitEstimate::Kind::Finite;
    est.value = intercept + slope * tr.ts[count - 1];
  } else {
    est.kind = LimitEstimate::Kind::NoTrend;
  }
  return est;
}

// Trend decision over the analysis window; the classification must agree with
// the one on the previous (half) horizon or the decision is discarded.
struct TrendDecision {
  LimitEstimate full;
  bool stable = true;
};

TrendDecision decide_trend(const Trace& tr, std::size_t half_count,
                           const CriterionConfig& cfg) {
  TrendDecision d;
  d.full = estimate_prefix(tr, tr.ts.size(), cfg);
  if (half_count >= 64 && half_count < tr.ts.size()) {
    LimitEstimate half = estimate_prefix(tr, half_count, cfg);
    d.stable = half.kind == d.full.kind;
  }
  return d;
}

ConditionOutcome bounded_above_from(const TrendDecision& d,
                                    const CriterionConfig& cfg) {
  ConditionOutcome out;
  if (!d.stable) {
    out.status = ConditionStatus::Inconclusive;
    out.note = "trend class changed under horizon doubling";
    return out;
  }
  const LimitEstimate& e = d.full;
  out.summary = e.trace_max;
  switch (e.kind) {
    case LimitEstimate::Kind::DivergesPlus:
      out.status = ConditionStatus::Fails;
      out.note = "diverges to +infinity";
      break;
    case LimitEstimate::Kind::Finite:
    case LimitEstimate::Kind::DivergesMinus:
      out.status = ConditionStatus::Holds;
      out.note = "settled trend, bounded above";
      break;
    case LimitEstimate::Kind::NoTrend:
      if (e.trace_max <= cfg.lambda) {
        out.status = ConditionStatus::Holds;
        out.note = "oscillates within the divergence band";
      } else {
        out.status = ConditionStatus::Inconclusive;
        out.note = "no settled trend and band exceeded";
      }
      break;
  }
  return out;
}

ConditionOutcome bounded_below_from(const TrendDecision& d,
                                    const CriterionConfig& cfg) {
  ConditionOutcome out;
  if (!d.stable) {
    out.status = ConditionStatus::Inconclusive;
    out.note = "trend class changed under horizon doubling";
    return out;
  }
  const LimitEstimate& e = d.full;
  out.summary = e.trace_min;
  switch (e.kind) {
    case LimitEstimate::Kind::DivergesMinus:
      out.status = ConditionStatus::Fails;
      out.note = "diverges to -infinity";
      break;
    case LimitEstimate::Kind::Finite:
    case LimitEstimate::Kind::DivergesPlus:
      out.status = ConditionStatus::Holds;
      out.note = "settled trend, bounded below";
      break;
    case LimitEstimate::Kind::NoTrend:
      if (e.trace_min >= -cfg.lambda) {
        out.status = ConditionStatus::Holds;
        out.note = "oscillates within the divergence band";
      } else {
        out.status = ConditionStatus::Inconclusive;
        out.note = "no settled trend and band exceeded";
      }
      break;
  }
  return out;
}

// lim = +inf / lim = -inf decisions: Holds when the trace diverges in the
// required direction, Fails when it settles or diverges the other way.
ConditionOutcome limit_is_plus_inf(const TrendDecision& d) {
  ConditionOutcome out;
  if (!d.stable) {
    out.status = ConditionStatus::Inconclusive;
    out.note = "trend class changed under horizon doubling";
    return out;
  }
  out.summary = d.full.tail_min;
  switch (d.full.kind) {
    case LimitEstimate::Kind::DivergesPlus:
      out.status = ConditionStatus::Holds;
      break;
    case LimitEstimate::Kind::Finite:
    case LimitEstimate::Kind::DivergesMinus:
      out.status = ConditionStatus::Fails;
      out.note = "limit is not +infinity";
      break;
    case LimitEstimate::Kind::NoTrend:
      out.status = ConditionStatus::Inconclusive;
      break;
  }
  return out;
}

ConditionOutcome limit_is_minus_inf(const TrendDecision& d) {
  ConditionOutcome out;
  if (!d.stable) {
    out.status = ConditionStatus::Inconclusive;
    out.note = "trend class changed under horizon doubling";
    return out;
  }
  out.summary = d.full.tail_max;
  switch (d.full.kind) {
    case LimitEstimate::Kind::DivergesMinus:
      out.status = ConditionStatus::Holds;
      break;
    case LimitEstimate::Kind::Finite:
    case LimitEstimate::Kind::DivergesPlus:
      out.status = ConditionStatus::Fails;
      out.note = "limit is not -infinity";
      break;
    case LimitEstimate::Kind::NoTrend:
      out.status = ConditionStatus::Inconclusive;
      break;
  }
  return out;
}

ConditionOutcome all_of(std::initializer_list<ConditionOutcome> list) {
  ConditionOutcome out;
  out.status = ConditionStatus::Holds;
  for (const auto& o : list) {
    if (o.status == ConditionStatus::Fails) {
      out.status = ConditionStatus::Fails;
      out.note = o.note;
      return out;
    }
    if (o.status == ConditionStatus::Inconclusive)
      out.status = ConditionStatus::Inconclusive;
  }
  return out;
}

ConditionOutcome any_of(std::initializer_list<ConditionOutcome> list) {
  ConditionOutcome out;
  out.status = ConditionStatus::Fails;
  for (const auto& o : list) {
    if (o.status == ConditionStatus::Holds) return o;
    if (o.status == ConditionStatus::Inconclusive)
      out.status = ConditionStatus::Inconclusive;
  }
  return out;
}

}  // namespace

ConditionOutcome check_bounded_above(const Trace& tr,
                                     const CriterionConfig& cfg) {
  return bounded_above_from({estimate_limit(tr, cfg), true}, cfg);
}

ConditionOutcome check_bounded_below(const Trace& tr,
                                     const CriterionConfig& cfg) {
  return bounded_below_from({estimate_limit(tr, cfg), true}, cfg);
}

LimitEstimate estimate_limit(const Trace& tr, const CriterionConfig& cfg) {
  return estimate_prefix(tr, tr.ts.size(), cfg);
}

// ---------------------------------------------------------------------------
// functional building blocks

namespace {

double real_at(const Expr& e, double t) { return eval(e, t).real(); }
double abs_at(const Expr& e, double t) { return std::abs(eval(e, t)); }

void require_positive(const Expr& g, std::span<const double> ts,
                      const char* what) {
  for (double t : ts)
    if (!(eval(g, t).real() > 0.0))
      throw PreconditionError(std::string(what) +
                              " must be positive on the grid");
}

void require_negative(const Expr& g, std::span<const double> ts,
                      const char* what) {
  for (double t : ts)
    if (!(eval(g, t).real() < 0.0))
      throw PreconditionError(std::string(what) +
                              " must be negative on the grid");
}

}  // namespace

Trace compute_L(const Expr& Gk, const Expr& Gkp, const Grid& grid,
                const CriterionConfig& cfg) {
  grid.validate();
  auto ts = grid.times();
  require_positive(Gk, ts, "G");
  auto integrand = [&](double t) {
    double g = real_at(Gk, t);
    return abs_at(Gkp, t) / (2.0 * std::pow(g, 0.75));
  };
  auto cum = cumulative_integral(integrand, ts, cfg.quad_tol);
  Trace tr;
  tr.ts = ts;
  tr.vs.resize(ts.size());
  for (std::size_t i = 0; i < ts.size(); ++i)
    tr.vs[i] = cum[i] / std::pow(real_at(Gk, ts[i]), 0.25);
  return tr;
}

Trace total_variation(const Expr& f, const Grid& grid,
                      const CriterionConfig& cfg) {
  grid.validate();
  auto ts = grid.times();
  Expr fp = simplify(differentiate(f));
  auto integrand = [&](double t) { return abs_at(fp, t); };
  Trace tr;
  tr.ts = ts;
  tr.vs = cumulative_integral(integrand, ts, cfg.quad_tol);
  return tr;
}

Trace compute_R_rho(const Expr& x, const Expr& xp, const Grid& grid,
                    const CriterionConfig& cfg) {
  grid.validate();
  auto ts = grid.times();
  const std::size_t n = ts.size();
  require_positive(x, ts, "x");

  std::vector<double> xv(n), g(n);
  for (std::size_t i = 0; i < n; ++i) {
    xv[i] = real_at(x, ts[i]);
    g[i] = abs_at(xp, ts[i]) / (2.0 * xv[i]);  // |(sqrt x)'| / sqrt x
  }
  auto cum_sqrt = cumulative_integral(
      [&](double t) { return std::sqrt(real_at(x, t)); }, ts, cfg.quad_tol);

  std::vector<double> prefix_sup(n);
  double run = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    run = std::max(run, g[i]);
    prefix_sup[i] = run;
  }

  const double s0 = std::sqrt(xv[0]);
  const double t0 = ts[0];
  Trace tr;
  tr.ts = ts;
  tr.vs.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    double best = std::numeric_limits<double>::infinity();
    double suffix_sup = 0.0;
    double denom = 1.0 + s0 * (ts[i] - t0);
    for (std::size_t jj = 0; jj <= i; ++jj) {
      std::size_t j = i - jj;  // descending split point grows the suffix sup
      suffix_sup = std::max(suffix_sup, g[j]);
      double decay = std::exp(-(cum_sqrt[i] - cum_sqrt[j]));
      double R = (1.0 + s0 * (ts[j] - t0)) / denom * decay * prefix_sup[j] +
                 suffix_sup;
      best = std::min(best, R);
    }
    tr.vs[i] = best;
  }
  return tr;
}

// ---------------------------------------------------------------------------
// functional traces

namespace {

Trace assemble_functional(std::span<const double> ts,
                          const std::function<double(double)>& integrand,
                          const std::function<double(double)>& pointwise,
                          double quad_tol) {
  Trace tr;
  tr.ts.assign(ts.begin(), ts.end());
  tr.vs = cumulative_integral(integrand, ts, quad_tol);
  for (std::size_t i = 0; i < ts.size(); ++i) tr.vs[i] += pointwise(ts[i]);
  return tr;
}

}  // namespace

Trace functional_trace(FunctionalKind kind, const ReducedSystem& red,
                       const Grid& grid, const CriterionConfig& cfg) {
  grid.validate();
  auto ts = grid.times();
  const Expr &S = red.S, &G1 = red.G1, &G2 = red.G2, &P1 = red.P1;
  const Expr &b = red.b, &c = red.c;

  auto re_S = [&S](double t) { return real_at(S, t); };
  auto sqrt_abs = [](const Expr& g, double t) {
    return std::sqrt(std::abs(eval(g, t).real()));
  };

  switch (kind) {
    case FunctionalKind::T31a:
    case FunctionalKind::T32a:
      require_positive(G1, ts, "G1");
      return assemble_functional(
          ts, re_S,
          [&](double t) {
            return -std::log(abs_at(b, t)) - 0.5 * std::log(real_at(G1, t));
          },
          cfg.quad_tol);
    case FunctionalKind::T31b:
      require_positive(G2, ts, "G2");
      return assemble_functional(
          ts, re_S,
          [&](double t) {
            return -std::log(abs_at(c, t)) - 0.5 * std::log(real_at(G2, t));
          },
          cfg.quad_tol);
    case FunctionalKind::T32b:
    case FunctionalKind::T33b:
      require_negative(G2, ts, "G2");
      return assemble_functional(
          ts, [&](double t) { return re_S(t) + sqrt_abs(G2, t); },
          [&](double t) {
            return -std::log(abs_at(c, t)) -
                   0.5 * std::log(std::abs(real_at(G2, t)));
          },
          cfg.quad_tol);
    case FunctionalKind::T33a:
      require_negative(G1, ts, "G1");
      return assemble_functional(
          ts, [&](double t) { return re_S(t) + sqrt_abs(G1, t); },
          [&](double t) {
            return -std::log(abs_at(b, t)) -
                   0.5 * std::log(std::abs(real_at(G1, t)));
          },
          cfg.quad_tol);
    case FunctionalKind::T34a:
      require_positive(G1, ts, "G1");
      return assemble_functional(
          ts, re_S,
          [&](double t) {
            return std::log(abs_at(b, t)) - 0.5 * std::log(real_at(G1, t)) +
                   2.0 * std::log(1.0 + abs_at(P1, t));
          },
          cfg.quad_tol);
    case FunctionalKind::T34b:
      require_positive(G1, ts, "G1");
      return assemble_functional(
          ts, re_S,
          [&](double t) {
            return std::log(abs_at(b, t)) + 0.5 * std::log(real_at(G1, t));
          },
          cfg.quad_tol);
    case FunctionalKind::T35:
      require_negative(G1, ts, "G1");
      return assemble_functional(
          ts, [&](double t) { return re_S(t) + 2.0 * sqrt_abs(G1, t); },
          [&](double t) {
            double ag = std::abs(real_at(G1, t));
            Complex inner = eval(P1, t) + Complex(2.0 * std::sqrt(ag), 0.0);
            return std::log(abs_at(b, t)) +
                   2.0 * std::log(1.0 + std::abs(inner)) - 0.5 * std::log(ag);
          },
          cfg.quad_tol);
    default:
      throw PreconditionError(
          "scalar functional kind needs the scalar-equation overload");
  }
}

Trace functional_trace(FunctionalKind kind, const ScalarEquation& eq,
                       const Expr& G, const Grid& grid,
                       const CriterionConfig& cfg) {
  grid.validate();
  auto ts = grid.times();
  const Expr& p = eq.p;

  auto re_p = [&p](double t) { return real_at(p, t); };
  auto sqrt_absG = [&G](double t) {
    return std::sqrt(std::abs(eval(G, t).real()));
  };

  switch (kind) {
    case FunctionalKind::T21:
      require_positive(G, ts, "G");
      return assemble_functional(
          ts, re_p,
          [&](double t) { return 0.5 * std::log(real_at(G, t)); },
          cfg.quad_tol);
    case FunctionalKind::T22a:
      require_positive(G, ts, "G");
      return assemble_functional(
          ts, re_p,
          [&](double t) {
            return -2.0 * std::log(1.0 + abs_at(p, t)) +
                   0.5 * std::log(real_at(G, t));
          },
          cfg.quad_tol);
    case FunctionalKind::T22b:
      require_positive(G, ts, "G");
      return assemble_functional(
          ts, re_p,
          [&](double t) { return -0.5 * std::log(real_at(G, t)); },
          cfg.quad_tol);
    case FunctionalKind::T23:
      require_negative(G, ts, "G");
      return assemble_functional(
          ts, [&](double t) { return re_p(t) - 2.0 * sqrt_absG(t); },
          [&](double t) {
            return 0.5 * std::log(std::abs(real_at(G, t)));
          },
          cfg.quad_tol);
    case FunctionalKind::T24:
      require_negative(G, ts, "G");
      return assemble_functional(
          ts, [&](double t) { return re_p(t) - 2.0 * sqrt_absG(t); },
          [&](double t) {
            Complex inner =
                eval(p, t) - Complex(2.0 * sqrt_absG(t), 0.0);
            return 0.5 * std::log(std::abs(real_at(G, t))) -
                   2.0 * std::log(1.0 + std::abs(inner));
          },
          cfg.quad_tol);
    default:
      throw PreconditionError(
          "system functional kind needs the reduced-system overload");
  }
}

// ---------------------------------------------------------------------------
// condition evaluators

namespace {

struct Workspace {
  std::vector<double> ts;    // analysis window samples (doubled horizon)
  std::size_t half_n;        // sample count of the previous horizon
  Grid analysis;             // grid covering the analysis window
  const CriterionConfig* cfg;

  TrendDecision decide(const Trace& tr) const {
    return decide_trend(tr, half_n, *cfg);
  }
};

Workspace make_workspace(const Grid& grid, const CriterionConfig& cfg) {
  Workspace ws;
  ws.analysis = grid;
  ws.half_n = grid.n;
  for (int k = 0; k < std::max(0, cfg.doublings); ++k) {
    ws.half_n = ws.analysis.n;
    ws.analysis = ws.analysis.doubled();
  }
  ws.ts = ws.analysis.times();
  ws.cfg = &cfg;
  return ws;
}

Trace eval_trace(const Workspace& ws, const std::function<double(double)>& f) {
  Trace tr;
  tr.ts = ws.ts;
  tr.vs.resize(ws.ts.size());
  for (std::size_t i = 0; i < ws.ts.size(); ++i) tr.vs[i] = f(ws.ts[i]);
  return tr;
}

ConditionOutcome guarded(const std::function<ConditionOutcome()>& f) {
  try {
    return f();
  } catch (const std::exception& e) {
    return {ConditionStatus::Inconclusive, 0.0, e.what()};
  }
}

ConditionOutcome cond_sign(const Workspace& ws, const Expr& G, bool positive) {
  double worst = positive ? std::numeric_limits<double>::infinity()
                          : -std::numeric_limits<double>::infinity();
  for (double t : ws.ts) {
    double v = real_at(G, t);
    worst = positive ? std::min(worst, v) : std::max(worst, v);
  }
  ConditionOutcome out;
  out.summary = worst;
  bool ok = positive ? worst > 0.0 : worst < 0.0;
  out.status = ok ? ConditionStatus::Holds : ConditionStatus::Fails;
  out.note = positive ? "sign condition G > 0" : "sign condition G < 0";
  return out;
}

// lim G'/G^{3/2} = alpha with |alpha| < 4; needs G > 0.
ConditionOutcome cond_alpha(const Workspace& ws, const Expr& G,
                            const Expr& Gp) {
  Trace tr = eval_trace(ws, [&](double t) {
    double g = real_at(G, t);
    if (!(g > 0.0)) throw PreconditionError("alpha limit needs G > 0");
    return real_at(Gp, t) / std::pow(g, 1.5);
  });
  TrendDecision d = ws.decide(tr);
  ConditionOutcome out;
  if (!d.stable) {
    out.status = ConditionStatus::Inconclusive;
    out.note = "limit class changed under horizon doubling";
    return out;
  }
  switch (d.full.kind) {
    case LimitEstimate::Kind::Finite:
      out.summary = d.full.value;
      if (std::abs(d.full.value) < 4.0) {
        out.status = ConditionStatus::Holds;
        out.note = "finite limit with |alpha| < 4";
      } else {
        out.status = ConditionStatus::Fails;
        out.note = "limit exists but |alpha| >= 4";
      }
      break;
    case LimitEstimate::Kind::DivergesPlus:
    case LimitEstimate::Kind::DivergesMinus:
      out.status = ConditionStatus::Fails;
      out.note = "G'/G^{3/2} diverges";
      break;
    case LimitEstimate::Kind::NoTrend:
      out.status = ConditionStatus::Inconclusive;
      out.note = "no settled limit of G'/G^{3/2}";
      break;
  }
  return out;
}

ConditionOutcome cond_L_bounded(const Workspace& ws, const Expr& G,
                                const Expr& Gp) {
  Trace tr = compute_L(G, Gp, ws.analysis, *ws.cfg);
  auto out = bounded_above_from(ws.decide(tr), *ws.cfg);
  out.note = "L(t) " + out.note;
  return out;
}

ConditionOutcome cond_var_bounded(const Workspace& ws, const Expr& G,
                                  const Expr& Gp) {
  require_positive(G, ws.ts, "G");
  Expr f = simplify(Expr::mul(Gp, Expr::pow(G, -1.5)));
  Trace tr = total_variation(f, ws.analysis, *ws.cfg);
  auto out = bounded_above_from(ws.decide(tr), *ws.cfg);
  out.note = "Var G'/G^{3/2} " + out.note;
  return out;
}

ConditionOutcome cond_nonincreasing(const Workspace& ws, const Expr& G) {
  double worst = 0.0;
  double prev = real_at(G, ws.ts[0]);
  for (std::size_t i = 1; i < ws.ts.size(); ++i) {
    double v = real_at(G, ws.ts[i]);
    worst = std::max(worst, (v - prev) / (1.0 + std::abs(prev)));
    prev = v;
  }
  ConditionOutcome out;
  out.summary = worst;
  if (worst <= ws.cfg->tol_mono) {
    out.status = ConditionStatus::Holds;
    out.note = "non-increasing on grid";
  } else {
    out.status = ConditionStatus::Fails;
    out.note = "increases on grid";
  }
  return out;
}

// G'/|G|^{3/2-eps} bounded for some eps > 0, searched over a fixed ladder.
ConditionOutcome cond_envelope_eps(const Workspace& ws, const Expr& G,
                                   const Expr& Gp) {
  ConditionOutcome best;
  best.status = ConditionStatus::Fails;
  for (double eps : {0.5, 0.25, 0.1, 0.05}) {
    Trace tr = eval_trace(ws, [&](double t) {
      double ag = std::abs(real_at(G, t));
      if (!(ag > 0.0))
        throw PreconditionError("|G| vanishes on grid");
      return std::abs(real_at(Gp, t)) / std::pow(ag, 1.5 - eps);
    });
    ConditionOutcome o = bounded_above_from(ws.decide(tr), *ws.cfg);
    if (o.status == ConditionStatus::Holds) {
      o.summary = eps;
      o.note = "bounded with eps = " + std::to_string(eps);
      return o;
    }
    if (o.status == ConditionStatus::Inconclusive)
      best.status = ConditionStatus::Inconclusive;
  }
  best.note = "no eps in the ladder bounds G'/|G|^{3/2-eps}";
  return best;
}

// |G| >= eps > 0 with the witness eps taken as half the grid minimum.
ConditionOutcome cond_floor(const Workspace& ws, const Expr& G) {
  double mn = std::numeric_limits<double>::infinity();
  for (double t : ws.ts) mn = std::min(mn, std::abs(real_at(G, t)));
  ConditionOutcome out;
  out.summary = 0.5 * mn;
  if (0.5 * mn > ws.cfg->eps_floor) {
    out.status = ConditionStatus::Holds;
    out.note = "|G| bounded away from zero (witness eps = half grid min)";
  } else {
    out.status = ConditionStatus::Fails;
    out.note = "|G| approaches zero on grid";
  }
  return out;
}

ConditionOutcome cond_ratio_bounded(const Workspace& ws, const Expr& G,
                                    const Expr& Gp) {
  Trace tr = eval_trace(ws, [&](double t) {
    double ag = std::abs(real_at(G, t));
    if (!(ag > 0.0)) throw PreconditionError("|G| vanishes on grid");
    return std::abs(real_at(Gp, t)) / ag;
  });
  auto out = bounded_above_from(ws.decide(tr), *ws.cfg);
  out.note = "G'/G " + out.note;
  return out;
}

// Convergence of an improper integral, decided by value stability between the
// half and full horizons.
ConditionOutcome integral_converged(const Workspace& ws,
                                    const std::vector<double>& integrand) {
  double half = simpson_sampled(
      std::span(ws.ts).first(ws.half_n),
      std::span(integrand).first(std::min(ws.half_n, integrand.size())));
  double full = simpson_sampled(ws.ts, integrand);
  double delta = std::abs(full - half);
  ConditionOutcome out;
  out.summary = full;
  if (delta <= ws.cfg->integral_stab_rel * (std::abs(full) + 1e-12)) {
    out.status = ConditionStatus::Holds;
    out.note = "integral stable under horizon doubling";
  } else if (delta > 0.25 * (std::abs(full) + 1e-12)) {
    out.status = ConditionStatus::Fails;
    out.note = "integral still growing under horizon doubling";
  } else {
    out.status = ConditionStatus::Inconclusive;
    out.note = "integral not yet settled";
  }
  return out;
}

// int rho_{|G|} |G'|/|G|^{3/2} < +infinity
ConditionOutcome cond_rho_integral(const Workspace& ws, const Expr& G,
                                   const Expr& Gp, bool g_negative) {
  Expr x = g_negative ? simplify(-G) : G;
  Expr xp = g_negative ? simplify(-Gp) : Gp;
  Trace rho = compute_R_rho(x, xp, ws.analysis, *ws.cfg);
  std::vector<double> integrand(ws.ts.size());
  for (std::size_t i = 0; i < ws.ts.size(); ++i) {
    double ag = std::abs(real_at(G, ws.ts[i]));
    integrand[i] = rho.vs[i] * std::abs(real_at(Gp, ws.ts[i])) /
                   std::pow(ag, 1.5);
  }
  auto out = integral_converged(ws, integrand);
  out.note = "rho-weighted variation integral: " + out.note;
  return out;
}

// Remark 3.2 replacement: -G >= eps, |G'/G| <= M/(1+t-t0)^alpha with alpha
// fitted by least squares, and the corrected integral finite.
ConditionOutcome cond_remark32(const Workspace& ws, const Expr& G,
                               const Expr& Gp, bool g_negative) {
  ConditionOutcome floor_ok = cond_floor(ws, G);
  if (g_negative) {
    ConditionOutcome sign = cond_sign(ws, G, /*positive=*/false);
    if (sign.status != ConditionStatus::Holds) return sign;
  }
  if (floor_ok.status != ConditionStatus::Holds) return floor_ok;

  double t0 = ws.ts.front();
  std::vector<double> ratio(ws.ts.size());
  for (std::size_t i = 0; i < ws.ts.size(); ++i) {
    double ag = std::abs(real_at(G, ws.ts[i]));
    ratio[i] = std::abs(real_at(Gp, ws.ts[i])) / ag;
  }

  double alpha = 1.0, big_m = 0.0;
  std::size_t usable = 0;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < ws.ts.size(); ++i) {
    if (ratio[i] <= 1e-14) continue;
    double x = std::log(1.0 + ws.ts[i] - t0);
    double y = std::log(ratio[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += y * x;
    ++usable;
  }
  if (usable >= 16) {
    double m = static_cast<double>(usable);
    double den = sxx - sx * sx / m;
    double slope = den > 0 ? (sxy - sx * sy / m) / den : 0.0;
    alpha = -slope;
    if (alpha < ws.cfg->alpha_min)
      return {ConditionStatus::Fails, alpha,
              "fitted envelope exponent alpha is not positive"};
    for (std::size_t i = 0; i < ws.ts.size(); ++i)
      big_m = std::max(big_m,
                       ratio[i] * std::pow(1.0 + ws.ts[i] - t0, alpha));
  }
  // int d tau / (sqrt|G| (1 + tau - t0)^{2 alpha}) < +infinity
  std::vector<double> integrand(ws.ts.size());
  for (std::size_t i = 0; i < ws.ts.size(); ++i) {
    double ag = std::abs(real_at(G, ws.ts[i]));
    integrand[i] = 1.0 / (std::sqrt(ag) *
                          std::pow(1.0 + ws.ts[i] - t0, 2.0 * alpha));
  }
  ConditionOutcome conv = integral_converged(ws, integrand);
  if (conv.status != ConditionStatus::Holds) {
    conv.note = "corrected integral: " + conv.note;
    return conv;
  }
  ConditionOutcome out;
  out.status = ConditionStatus::Holds;
  out.summary = alpha;
  out.note = "envelope alpha = " + std::to_string(alpha) +
             ", M = " + std::to_string(big_m) +
             ", corrected integral finite (Remark 3.2 read via Corollary "
             "2.1 and Theorem 2.4)";
  return out;
}

ConditionOutcome cond_expr_bounded(const Workspace& ws, const Expr& e,
                                   const char* what) {
  Trace tr = eval_trace(ws, [&](double t) { return abs_at(e, t); });
  auto out = bounded_above_from(ws.decide(tr), *ws.cfg);
  out.note = std::string(what) + " " + out.note;
  return out;
}

ConditionOutcome cond_inv_bounded(const Workspace& ws, const Expr& e,
                                  const char* what) {
  Trace tr = eval_trace(ws, [&](double t) {
    double m = abs_at(e, t);
    if (!(m > 0.0)) throw PreconditionError("coefficient vanishes on grid");
    return 1.0 / m;
  });
  auto out = bounded_above_from(ws.decide(tr), *ws.cfg);
  out.note = std::string(what) + " " + out.note;
  return out;
}

using Row = std::pair<std::string, ConditionOutcome>;

// Theorem 2.3 style alternative groups for one G of negative sign.
struct NegSideRows {
  ConditionOutcome sign, mono, env, floor, ratio, rho, r32;
  ConditionOutcome group_b() const { return all_of({sign, mono, env}); }
  ConditionOutcome group_c() const { return all_of({sign, floor, ratio, rho}); }
  ConditionOutcome gate() const {
    return all_of({sign, any_of({all_of({mono, env}),
                                 all_of({floor, ratio, rho}), r32})});
  }
};

NegSideRows eval_neg_side(const Workspace& ws, const Expr& G, const Expr& Gp) {
  NegSideRows r;
  r.sign = guarded([&] { return cond_sign(ws, G, false); });
  r.mono = guarded([&] { return cond_nonincreasing(ws, G); });
  r.env = guarded([&] { return cond_envelope_eps(ws, G, Gp); });
  r.floor = guarded([&] { return cond_floor(ws, G); });
  r.ratio = guarded([&] { return cond_ratio_bounded(ws, G, Gp); });
  r.rho = guarded([&] { return cond_rho_integral(ws, G, Gp, true); });
  r.r32 = guarded([&] { return cond_remark32(ws, G, Gp, true); });
  return r;
}

// Theorem 2.1 style rows for one G of positive sign.
struct PosSideRows {
  ConditionOutcome sign, alpha, L, var;
  ConditionOutcome gate() const { return all_of({sign, alpha, L, var}); }
};

PosSideRows eval_pos_side(const Workspace& ws, const Expr& G, const Expr& Gp) {
  PosSideRows r;
  r.sign = guarded([&] { return cond_sign(ws, G, true); });
  auto dependent = [&](const std::function<ConditionOutcome()>& f) {
    if (r.sign.status != ConditionStatus::Holds)
      return ConditionOutcome{ConditionStatus::Inconclusive, 0.0,
                              "skipped: requires G > 0 on grid"};
    return guarded(f);
  };
  r.alpha = dependent([&] { return cond_alpha(ws, G, Gp); });
  r.L = dependent([&] { return cond_L_bounded(ws, G, Gp); });
  r.var = dependent([&] { return cond_var_bounded(ws, G, Gp); });
  return r;
}

void push_pos_rows(std::vector<Row>& rows, const std::string& prefix,
                   const std::string& gk, const PosSideRows& r) {
  rows.emplace_back(prefix + ":sign:" + gk, r.sign);
  rows.emplace_back(prefix + ":alpha:" + gk, r.alpha);
  rows.emplace_back(prefix + ":L:" + gk, r.L);
  rows.emplace_back(prefix + ":Var:" + gk, r.var);
}

void push_neg_rows(std::vector<Row>& rows, const std::string& label_main,
                   const std::string& label_alt, const std::string& gk,
                   const NegSideRows& r) {
  rows.emplace_back(label_main + ":sign:" + gk, r.sign);
  rows.emplace_back(label_main + ":mono:" + gk, r.mono);
  rows.emplace_back(label_main + ":env:" + gk, r.env);
  rows.emplace_back(label_alt + ":floor:" + gk, r.floor);
  rows.emplace_back(label_alt + ":ratio:" + gk, r.ratio);
  rows.emplace_back(label_alt + ":rho:" + gk, r.rho);
  rows.emplace_back("R3.2:" + gk, r.r32);
}

// Evaluate the sup/limit lines of a section-3 theorem once its hypothesis
// gate holds: sup-lines finite <=> Lyapunov, limit-lines -> -inf <=> asymptotic.
void eval_sup_lines(ConditionReport& rep, const Workspace& ws,
                    const ReducedSystem& red,
                    std::initializer_list<FunctionalKind> kinds) {
  if (rep.gate.status != ConditionStatus::Holds) {
    rep.lyapunov = {ConditionStatus::Inconclusive, 0.0,
                    "functionals not evaluated: hypothesis gate not satisfied"};
    rep.asymptotic = rep.lyapunov;
    return;
  }
  std::vector<ConditionOutcome> sup, lim;
  for (FunctionalKind k : kinds) {
    try {
      Trace tr = functional_trace(k, red, ws.analysis, *ws.cfg);
      TrendDecision d = ws.decide(tr);
      sup.push_back(bounded_above_from(d, *ws.cfg));
      lim.push_back(limit_is_minus_inf(d));
    } catch (const std::exception& e) {
      sup.push_back({ConditionStatus::Inconclusive, 0.0, e.what()});
      lim.push_back({ConditionStatus::Inconclusive, 0.0, e.what()});
    }
  }
  rep.lyapunov = sup.size() == 1 ? sup[0] : all_of({sup[0], sup[1]});
  rep.asymptotic = lim.size() == 1 ? lim[0] : all_of({lim[0], lim[1]});
}

}  // namespace

ConditionReport check_theorem_conditions(TheoremId theorem,
                                         const ReducedSystem& red,
                                         const SystemSpec& sys,
                                         const Grid& grid,
                                         const CriterionConfig& cfg) {
  Workspace ws = make_workspace(grid, cfg);
  ConditionReport rep;
  rep.theorem = theorem;

  switch (theorem) {
    case TheoremId::T3_1: {
      PosSideRows r1 = eval_pos_side(ws, red.G1, red.G1p);
      PosSideRows r2 = eval_pos_side(ws, red.G2, red.G2p);
      push_pos_rows(rep.conditions, "1", "G1", r1);
      push_pos_rows(rep.conditions, "1", "G2", r2);
      rep.gate = all_of({r1.gate(), r2.gate()});
      eval_sup_lines(rep, ws, red,
                     {FunctionalKind::T31a, FunctionalKind::T31b});
      break;
    }
    case TheoremId::T3_2: {
      PosSideRows r1 = eval_pos_side(ws, red.G1, red.G1p);
      NegSideRows r2 = eval_neg_side(ws, red.G2, red.G2p);
      push_pos_rows(rep.conditions, "3", "G1", r1);
      push_neg_rows(rep.conditions, "5", "5_1", "G2", r2);
      rep.gate = all_of({r1.gate(), r2.gate()});
      eval_sup_lines(rep, ws, red,
                     {FunctionalKind::T32a, FunctionalKind::T32b});
      break;
    }
    case TheoremId::T3_3: {
      NegSideRows r1 = eval_neg_side(ws, red.G1, red.G1p);
      NegSideRows r2 = eval_neg_side(ws, red.G2, red.G2p);
      push_neg_rows(rep.conditions, "6", "7_1", "G1", r1);
      push_neg_rows(rep.conditions, "6", "7_1", "G2", r2);
      rep.gate = all_of({r1.gate(), r2.gate()});
      eval_sup_lines(rep, ws, red,
                     {FunctionalKind::T33a, FunctionalKind::T33b});
      break;
    }
    case TheoremId::T3_4: {
      ConditionOutcome ba =
          guarded([&] { return cond_expr_bounded(ws, sys.a, "a"); });
      ConditionOutcome bb =
          guarded([&] { return cond_expr_bounded(ws, sys.b, "b"); });
      ConditionOutcome binv =
          guarded([&] { return cond_inv_bounded(ws, sys.b, "1/b"); });
      PosSideRows r1 = eval_pos_side(ws, red.G1, red.G1p);
      rep.conditions.emplace_back("8:a", ba);
      rep.conditions.emplace_back("8:b", bb);
      rep.conditions.emplace_back("8:1/b", binv);
      push_pos_rows(rep.conditions, "9-10", "G1", r1);
      rep.gate = all_of({ba, bb, binv, r1.gate()});
      eval_sup_lines(rep, ws, red,
                     {FunctionalKind::T34a, FunctionalKind::T34b});
      break;
    }
    case TheoremId::T3_5: {
      ConditionOutcome ba =
          guarded([&] { return cond_expr_bounded(ws, sys.a, "a"); });
      ConditionOutcome bb =
          guarded([&] { return cond_expr_bounded(ws, sys.b, "b"); });
      ConditionOutcome binv =
          guarded([&] { return cond_inv_bounded(ws, sys.b, "1/b"); });
      NegSideRows r1 = eval_neg_side(ws, red.G1, red.G1p);
      rep.conditions.emplace_back("8:a", ba);
      rep.conditions.emplace_back("8:b", bb);
      rep.conditions.emplace_back("8:1/b", binv);
      push_neg_rows(rep.conditions, "11-12", "12_1", "G1", r1);
      rep.gate = all_of({ba, bb, binv, r1.gate()});
      eval_sup_lines(rep, ws, red, {FunctionalKind::T35});
      break;
    }
    default:
      rep.gate = {ConditionStatus::Inconclusive, 0.0,
                  "theorem id has no system-level condition table"};
      rep.lyapunov = rep.gate;
      rep.asymptotic = rep.gate;
      break;
  }
  return rep;
}

// ---------------------------------------------------------------------------
// sign case and classification

SignCase detect_sign_case(const ReducedSystem& red, const Grid& grid,
                          const CriterionConfig& cfg) {
  Workspace ws = make_workspace(grid, cfg);
  auto sign_of = [&](const Expr& g) -> int {
    // +1 positive, -1 negative, 0 near-zero, 2 indefinite
    double mn = std::numeric_limits<double>::infinity(), mx = -mn;
    double amax = 0.0;
    for (double t : ws.ts) {
      double v = real_at(g, t);
      mn = std::min(mn, v);
      mx = std::max(mx, v);
      amax = std::max(amax, std::abs(eval(g, t)));
    }
    if (amax <= 1e-12) return 0;
    if (mn > 0.0) return 1;
    if (mx < 0.0) return -1;
    return 2;
  };
  int s1 = sign_of(red.G1);
  int s2 = sign_of(red.G2);
  if (s1 == 0 && s2 == 0) return SignCase::Zero;
  if (s1 == 1 && s2 == 1) return SignCase::I;
  if (s1 == 1 && s2 == -1) return SignCase::II;
  if (s1 == -1 && s2 == -1) return SignCase::III;
  if (s1 == -1 && s2 == 1) return SignCase::VI;
  if (s1 == 1) return SignCase::IV;
  if (s2 == -1) return SignCase::V;
  return SignCase::Indefinite;
}

namespace {

// Map a gate-passed report's functional outcomes onto a classification;
// Inconclusive means this theorem did not decide.
Classification conclude(const ConditionReport& rep) {
  if (rep.gate.status != ConditionStatus::Holds)
    return Classification::Inconclusive;
  if (rep.asymptotic.status == ConditionStatus::Holds)
    return Classification::AsymptoticallyStable;
  if (rep.lyapunov.status == ConditionStatus::Holds)
    return Classification::LyapunovStable;
  if (rep.lyapunov.status == ConditionStatus::Fails)
    return Classification::NotStable;
  return Classification::Inconclusive;
}

}  // namespace

Verdict classify(const SystemSpec& sys, const Grid& grid,
                 const CriterionConfig& cfg) {
  Verdict verdict;
  Workspace ws = make_workspace(grid, cfg);

  try {
    check_nonvanishing(sys, ws.analysis, cfg.tol_nonzero);
  } catch (const std::exception& e) {
    verdict.note = e.what();
    verdict.applicability_error = true;
    return verdict;
  }

  // Constant real coefficients: Routh-Hurwitz shortcut. Complex constants
  // and boundary cases fall through to the general path.
  Complex ca, cb, cc, cd;
  if (is_constant(sys.a, &ca) && is_constant(sys.b, &cb) &&
      is_constant(sys.c, &cc) && is_constant(sys.d, &cd)) {
    bool all_real = ca.imag() == 0.0 && cb.imag() == 0.0 &&
                    cc.imag() == 0.0 && cd.imag() == 0.0;
    if (all_real) {
      double tr = ca.real() + cd.real();
      double det = ca.real() * cd.real() - cb.real() * cc.real();
      ConditionReport rh;
      rh.theorem = TheoremId::RouthHurwitz;
      ConditionOutcome trace_neg{
          tr < -cfg.tol_rh    ? ConditionStatus::Holds
          : tr > cfg.tol_rh   ? ConditionStatus::Fails
                              : ConditionStatus::Inconclusive,
          tr, "a0 + d0 < 0"};
      ConditionOutcome det_pos{
          det > cfg.tol_rh    ? ConditionStatus::Holds
          : det < -cfg.tol_rh ? ConditionStatus::Fails
                              : ConditionStatus::Inconclusive,
          det, "a0 d0 - b0 c0 > 0"};
      rh.conditions.emplace_back("trace<0", trace_neg);
      rh.conditions.emplace_back("det>0", det_pos);
      bool strict = std::abs(tr) > cfg.tol_rh && std::abs(det) > cfg.tol_rh;
      if (strict) {
        bool stable = tr < 0.0 && det > 0.0;
        rh.gate = {ConditionStatus::Holds, 0.0, "strict inequalities"};
        rh.lyapunov = {stable ? ConditionStatus::Holds : ConditionStatus::Fails,
                       0.0, ""};
        rh.asymptotic = rh.lyapunov;
        verdict.reports.push_back(rh);
        verdict.classification = stable ? Classification::AsymptoticallyStable
                                        : Classification::NotStable;
        verdict.decided_by = TheoremId::RouthHurwitz;
        return verdict;
      }
      rh.gate = {ConditionStatus::Inconclusive, 0.0,
                 "trace or determinant on the boundary; strict test abstains"};
      rh.lyapunov = rh.gate;
      rh.asymptotic = rh.gate;
      verdict.reports.push_back(rh);
    }
  }

  ReducedSystem red;
  try {
    red = reduce(sys, ws.analysis, cfg.tol_nonzero);

    ConditionOutcome real1 = check_G_realness(red, ws.analysis, GSelect::G1,
                                              cfg.tol_im);
    ConditionOutcome real2 = check_G_realness(red, ws.analysis, GSelect::G2,
                                              cfg.tol_im);
    bool g1_real = real1.status == ConditionStatus::Holds;
    bool g2_real = real2.status == ConditionStatus::Holds;
    if (!g1_real && !g2_real) {
      verdict.note =
          "G1 and G2 are not real-valued on the grid; the sign-based "
          "criteria do not apply";
      return verdict;
    }

    SignCase sc = detect_sign_case(red, grid, cfg);
    // A complex Gk has no usable sign; demote the affected side.
    if (!g1_real &&
        (sc == SignCase::I || sc == SignCase::II || sc == SignCase::III ||
         sc == SignCase::VI || sc == SignCase::IV))
      sc = g2_real ? SignCase::V : SignCase::Indefinite;
    if (!g2_real) {
      if (sc == SignCase::I || sc == SignCase::II) sc = SignCase::IV;
      else if (sc == SignCase::III || sc == SignCase::VI)
        sc = SignCase::Indefinite;
      else if (sc == SignCase::V) sc = SignCase::Indefinite;
    }
    verdict.sign_case = sc;
    verdict.has_sign_case = true;

    std::vector<TheoremId> candidates;
    switch (sc) {
      case SignCase::I:
        candidates = {TheoremId::T3_1, TheoremId::T3_4};
        break;
      case SignCase::II:
        candidates = {TheoremId::T3_2, TheoremId::T3_4};
        break;
      case SignCase::III:
        candidates = {TheoremId::T3_3, TheoremId::T3_5};
        break;
      case SignCase::IV:
        candidates = {TheoremId::T3_4};
        break;
      case SignCase::V:
        verdict.note =
            "case V (only G2 of constant sign): no section-3 criterion uses "
            "G2 alone";
        break;
      case SignCase::VI:
        verdict.note =
            "case VI (G1 < 0 < G2): reducible to case III by the phi -> -phi "
            "transform (transform_negate_phi); not chained automatically";
        break;
      case SignCase::Zero:
        verdict.note = "trivial case G1 = G2 = 0 on the grid";
        break;
      case SignCase::Indefinite:
        verdict.note = "neither G1 nor G2 keeps a constant sign on the grid";
        break;
    }

    for (TheoremId thm : candidates) {
      ConditionReport rep = check_theorem_conditions(thm, red, sys, grid, cfg);
      verdict.reports.push_back(rep);
      Classification c = conclude(rep);
      if (c != Classification::Inconclusive) {
        verdict.classification = c;
        verdict.decided_by = thm;
        if (c == Classification::LyapunovStable &&
            rep.asymptotic.status == ConditionStatus::Fails)
          verdict.note =
              "asymptotic limit lines definitively fail: Lyapunov stable "
              "but not asymptotically stable";
        return verdict;
      }
    }
    if (verdict.note.empty())
      verdict.note = "no applicable criterion reached a decision";
  } catch (const ApplicabilityError& e) {
    verdict.note = e.what();
    verdict.applicability_error = true;
  } catch (const EvalError& e) {
    verdict.note = std::string("coefficient evaluation fault: ") + e.what();
    verdict.applicability_error = true;
  }
  return verdict;
}

Verdict classify_scalar(const ScalarEquation& eq, const Grid& grid,
                        const CriterionConfig& cfg) {
  Verdict verdict;
  Workspace ws = make_workspace(grid, cfg);

  try {
    Expr p = simplify(eq.p);
    Expr pp = simplify(differentiate(p));
    Expr G = simplify(eq.q - Expr::constant(0.5) * pp -
                      Expr::constant(0.25) * Expr::pow(p, 2.0));
    Expr Gp = simplify(differentiate(G));

    double worst_im = 0.0;
    for (double t : ws.ts) {
      Complex v = eval(G, t);
      worst_im = std::max(worst_im, std::abs(v.imag()) / (1.0 + std::abs(v)));
    }
    if (worst_im > cfg.tol_im) {
      verdict.note = "G = q - p'/2 - p^2/4 is not real-valued on the grid";
      return verdict;
    }

    double mn = std::numeric_limits<double>::infinity(), mx = -mn, amax = 0.0;
    for (double t : ws.ts) {
      double v = real_at(G, t);
      mn = std::min(mn, v);
      mx = std::max(mx, v);
      amax = std::max(amax, std::abs(v));
    }

    if (amax <= 1e-12) {
      verdict.note = "G = 0 on the grid; the criteria assume G != 0";
      return verdict;
    }

    if (mn > 0.0) {
      // Theorems 2.1 / 2.2 share one hypothesis set.
      PosSideRows rows = eval_pos_side(ws, G, Gp);
      ConditionReport r21;
      r21.theorem = TheoremId::T2_1;
      push_pos_rows(r21.conditions, "2.1", "G", rows);
      r21.gate = rows.gate();

      ConditionReport r22;
      r22.theorem = TheoremId::T2_2;
      push_pos_rows(r22.conditions, "2.2", "G", rows);
      r22.gate = rows.gate();

      if (r21.gate.status == ConditionStatus::Holds) {
        Trace t21 = functional_trace(FunctionalKind::T21, eq, G, ws.analysis,
                                     cfg);
        TrendDecision d21 = ws.decide(t21);
        r21.lyapunov = bounded_below_from(d21, cfg);   // solutions bounded
        r21.asymptotic = limit_is_plus_inf(d21);       // solutions vanish

        Trace t22a = functional_trace(FunctionalKind::T22a, eq, G, ws.analysis,
                                      cfg);
        Trace t22b = functional_trace(FunctionalKind::T22b, eq, G, ws.analysis,
                                      cfg);
        TrendDecision da = ws.decide(t22a), db = ws.decide(t22b);
        r22.lyapunov =
            all_of({bounded_below_from(da, cfg), bounded_below_from(db, cfg)});
        r22.asymptotic = all_of({limit_is_plus_inf(da), limit_is_plus_inf(db)});
      } else {
        r21.lyapunov = r21.asymptotic = r22.lyapunov = r22.asymptotic = {
            ConditionStatus::Inconclusive, 0.0,
            "functionals not evaluated: hypothesis gate not satisfied"};
      }
      verdict.reports.push_back(r21);
      verdict.reports.push_back(r22);

      if (r22.gate.status == ConditionStatus::Holds) {
        if (r22.asymptotic.status == ConditionStatus::Holds) {
          verdict.classification = Classification::AsymptoticallyStable;
          verdict.decided_by = TheoremId::T2_2;
          return verdict;
        }
        if (r22.lyapunov.status == ConditionStatus::Holds) {
          verdict.classification = Classification::LyapunovStable;
          verdict.decided_by = TheoremId::T2_2;
          return verdict;
        }
        if (r22.lyapunov.status == ConditionStatus::Fails) {
          verdict.classification = Classification::NotStable;
          verdict.decided_by = TheoremId::T2_2;
          return verdict;
        }
        if (r21.lyapunov.status == ConditionStatus::Fails) {
          verdict.classification = Classification::NotStable;
          verdict.decided_by = TheoremId::T2_1;
          verdict.note = "solution boundedness criterion fails";
          return verdict;
        }
      }
      verdict.note = "G > 0 criteria inconclusive";
      return verdict;
    }

    if (mx < 0.0) {
      NegSideRows rows = eval_neg_side(ws, G, Gp);
      ConditionOutcome cor_gate = rows.r32;

      ConditionReport r23;
      r23.theorem = TheoremId::T2_3;
      push_neg_rows(r23.conditions, "B", "C", "G", rows);
      r23.gate = rows.gate();

      ConditionReport r24;
      r24.theorem = TheoremId::T2_4;
      r24.conditions.emplace_back("A:sign:G", rows.sign);
      r24.conditions.emplace_back("C:floor:G", rows.floor);
      r24.conditions.emplace_back("C:ratio:G", rows.ratio);
      r24.conditions.emplace_back("C:rho:G", rows.rho);
      r24.conditions.emplace_back("D:mono:G", rows.mono);
      r24.conditions.emplace_back("D:ratio:G", rows.ratio);
      r24.conditions.emplace_back("Cor2.1:G", cor_gate);
      ConditionOutcome group_c = all_of({rows.floor, rows.ratio, rows.rho});
      ConditionOutcome group_d = all_of({rows.mono, rows.ratio});
      r24.gate =
          all_of({rows.sign, any_of({group_c, group_d, cor_gate})});

      if (r24.gate.status == ConditionStatus::Holds) {
        Trace t24 = functional_trace(FunctionalKind::T24, eq, G, ws.analysis,
                                     cfg);
        TrendDecision d24 = ws.decide(t24);
        r24.lyapunov = bounded_below_from(d24, cfg);
        r24.asymptotic = limit_is_plus_inf(d24);
      } else {
        r24.lyapunov = r24.asymptotic = {
            ConditionStatus::Inconclusive, 0.0,
            "functionals not evaluated: hypothesis gate not satisfied"};
      }
      if (r23.gate.status == ConditionStatus::Holds) {
        Trace t23 = functional_trace(FunctionalKind::T23, eq, G, ws.analysis,
                                     cfg);
        TrendDecision d23 = ws.decide(t23);
        r23.lyapunov = bounded_below_from(d23, cfg);
        r23.asymptotic = limit_is_plus_inf(d23);
      } else {
        r23.lyapunov = r23.asymptotic = {
            ConditionStatus::Inconclusive, 0.0,
            "functionals not evaluated: hypothesis gate not satisfied"};
      }
      verdict.reports.push_back(r23);
      verdict.reports.push_back(r24);

      bool direct24 = any_of({group_c, group_d}).status ==
                      ConditionStatus::Holds;
      TheoremId who24 = direct24 ? TheoremId::T2_4 : TheoremId::C2_1;

      if (r24.gate.status == ConditionStatus::Holds) {
        if (r24.asymptotic.status == ConditionStatus::Holds) {
          verdict.classification = Classification::AsymptoticallyStable;
          verdict.decided_by = who24;
          return verdict;
        }
        if (r24.lyapunov.status == ConditionStatus::Holds) {
          verdict.classification = Classification::LyapunovStable;
          verdict.decided_by = who24;
          return verdict;
        }
        if (r24.lyapunov.status == ConditionStatus::Fails) {
          verdict.classification = Classification::NotStable;
          verdict.decided_by = who24;
          return verdict;
        }
      }
      if (r23.gate.status == ConditionStatus::Holds) {
        if (r23.lyapunov.status == ConditionStatus::Fails) {
          verdict.classification = Classification::NotStable;
          verdict.decided_by = TheoremId::T2_3;
          verdict.note = "solution boundedness criterion fails";
          return verdict;
        }
        if (r23.lyapunov.status == ConditionStatus::Holds)
          verdict.note =
              "solutions bounded by Theorem 2.3; derivative boundedness "
              "undecided";
      }
      if (verdict.note.empty()) verdict.note = "G < 0 criteria inconclusive";
      return verdict;
    }

    verdict.note = "G changes sign on the grid";
    return verdict;
  } catch (const EvalError& e) {
    verdict.note = std::string("coefficient evaluation fault: ") + e.what();
    verdict.applicability_error = true;
    return verdict;
  }
}

}  // namespace ltvstab
