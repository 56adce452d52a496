#pragma once

// Embedded Dormand-Prince 5(4) stepper with PI step-size control.
// Internal to the oracle; steps land exactly on requested output times.

#include <algorithm>
#include <array>
#include <cmath>

#include "ltvstab/oracle.hpp"

namespace ltvstab::detail {

template <std::size_t N>
using State = std::array<double, N>;

template <std::size_t N, class Rhs>
class Rk45 {
 public:
  Rk45(Rhs rhs, const OdeOptions& opts, double span)
      : rhs_(std::move(rhs)), o_(opts), span_(std::max(span, 1e-30)) {
    hcap_ = o_.step_cap_scale * std::sqrt(o_.rtol);
    hmin_ = o_.hmin_rel * std::max(1.0, span_);
  }

  void set_state(double t, const State<N>& y) {
    t_ = t;
    y_ = y;
    rhs_(t_, y_, f_);
    h_ = std::min(hcap_, 0.01 * span_);
    facold_ = 1e-4;
  }

  double t() const { return t_; }
  const State<N>& y() const { return y_; }
  const State<N>& f() const { return f_; }

  void advance_to(double t_target) {
    while (t_ < t_target) single_step(t_target);
  }

  /// Advance to t_target unless escape(y) turns true at an accepted step;
  /// then bracket the crossing to 1e-6 and report it through *esc_t.
  template <class Esc>
  bool advance_to_escape(double t_target, Esc&& escape, double* esc_t) {
    while (t_ < t_target) {
      double t_prev = t_;
      State<N> y_prev = y_;
      single_step(t_target);
      if (escape(y_)) {
        *esc_t = locate_escape(t_prev, y_prev, t_, escape);
        return false;
      }
    }
    return true;
  }

 private:
  static constexpr double kSafe = 0.9;
  static constexpr double kBeta = 0.04;
  static constexpr double kExpo = 0.2 - 0.75 * kBeta;
  static constexpr double kMaxShrink = 5.0;  // per attempt
  static constexpr double kMaxGrow = 10.0;

  void single_step(double t_limit) {
    double h = std::min({h_, hcap_, t_limit - t_});
    bool lands = (h == t_limit - t_);
    for (;;) {
      if (++steps_ > o_.max_steps)
        throw IntegratorError("step budget exhausted", t_);
      if (h < hmin_)
        throw IntegratorError("step size underflow (stiffness suspected)", t_);

      stages(h);
      double err = error_norm(h);
      double fac11 = std::pow(std::max(err, 1e-10), kExpo);
      if (!(err <= 1.0)) {  // reject (also on NaN)
        double shrink = std::isfinite(err)
                            ? std::min(kMaxShrink, fac11 / kSafe)
                            : kMaxShrink;
        h /= shrink;
        lands = false;
        continue;
      }
      double fac = fac11 / std::pow(facold_, kBeta);
      fac = std::clamp(fac / kSafe, 1.0 / kMaxGrow, kMaxShrink);
      facold_ = std::max(err, 1e-4);
      t_ = lands ? t_limit : t_ + h;
      y_ = ynew_;
      f_ = k7_;  // FSAL
      h_ = std::min(h / fac, hcap_);
      return;
    }
  }

  void stages(double h) {
    const State<N>&k1 = f_;
    State<N> yt;

    for (std::size_t i = 0; i < N; ++i)
      yt[i] = y_[i] + h * (0.2 * k1[i]);
    rhs_(t_ + 0.2 * h, yt, k2_);

    for (std::size_t i = 0; i < N; ++i)
      yt[i] = y_[i] + h * (3.0 / 40.0 * k1[i] + 9.0 / 40.0 * k2_[i]);
    rhs_(t_ + 0.3 * h, yt, k3_);

    for (std::size_t i = 0; i < N; ++i)
      yt[i] = y_[i] + h * (44.0 / 45.0 * k1[i] - 56.0 / 15.0 * k2_[i] +
                           32.0 / 9.0 * k3_[i]);
    rhs_(t_ + 0.8 * h, yt, k4_);

    for (std::size_t i = 0; i < N; ++i)
      yt[i] = y_[i] + h * (19372.0 / 6561.0 * k1[i] - 25360.0 / 2187.0 * k2_[i] +
                           64448.0 / 6561.0 * k3_[i] - 212.0 / 729.0 * k4_[i]);
    rhs_(t_ + 8.0 / 9.0 * h, yt, k5_);

    for (std::size_t i = 0; i < N; ++i)
      yt[i] = y_[i] + h * (9017.0 / 3168.0 * k1[i] - 355.0 / 33.0 * k2_[i] +
                           46732.0 / 5247.0 * k3_[i] + 49.0 / 176.0 * k4_[i] -
                           5103.0 / 18656.0 * k5_[i]);
    rhs_(t_ + h, yt, k6_);

    for (std::size_t i = 0; i < N; ++i)
      ynew_[i] = y_[i] + h * (35.0 / 384.0 * k1[i] + 500.0 / 1113.0 * k3_[i] +
                              125.0 / 192.0 * k4_[i] -
                              2187.0 / 6784.0 * k5_[i] + 11.0 / 84.0 * k6_[i]);
    rhs_(t_ + h, ynew_, k7_);
  }

  double error_norm(double h) {
    const State<N>&k1 = f_;
    double acc = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      double e = h * (71.0 / 57600.0 * k1[i] - 71.0 / 16695.0 * k3_[i] +
                      71.0 / 1920.0 * k4_[i] - 17253.0 / 339200.0 * k5_[i] +
                      22.0 / 525.0 * k6_[i] - 1.0 / 40.0 * k7_[i]);
      double sc = o_.atol + o_.rtol * std::max(std::abs(y_[i]),
                                               std::abs(ynew_[i]));
      double q = e / sc;
      acc += q * q;
    }
    return std::sqrt(acc / N);
  }

  template <class Esc>
  double locate_escape(double t_a, State<N> y_a, double t_b, Esc&& escape) {
    while (t_b - t_a > 1e-6) {
      double t_m = 0.5 * (t_a + t_b);
      Rk45 sub(rhs_, o_, span_);
      sub.set_state(t_a, y_a);
      sub.advance_to(t_m);
      if (escape(sub.y_)) {
        t_b = t_m;
      } else {
        t_a = t_m;
        y_a = sub.y_;
      }
    }
    return 0.5 * (t_a + t_b);
  }

  Rhs rhs_;
  OdeOptions o_;
  double span_;
  double hcap_, hmin_;
  double t_ = 0.0, h_ = 0.0, facold_ = 1e-4;
  long steps_ = 0;
  State<N> y_{}, f_{};
  State<N> k2_{}, k3_{}, k4_{}, k5_{}, k6_{}, k7_{}, ynew_{};
};

}  // namespace ltvstab::detail
