#pragma once

#include <cmath>
#include <complex>
#include <span>
#include <stdexcept>
#include <vector>

namespace ltvstab {

struct QuadratureError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

template <class T, class F>
T simpson_recurse(F& f, double a, double c, double b, T fa, T fc, T fb, T whole,
                  double tol, int depth) {
  double lm = 0.5 * (a + c), rm = 0.5 * (c + b);
  T flm = f(lm), frm = f(rm);
  T left = (fa + 4.0 * flm + fc) * ((c - a) / 6.0);
  T right = (fc + 4.0 * frm + fb) * ((b - c) / 6.0);
  T err = left + right - whole;
  if (std::abs(err) <= 15.0 * tol || depth <= 0) {
    if (depth <= 0 && !(std::abs(err) <= 1e6 * (tol + 1e-300)))
      throw QuadratureError("adaptive Simpson failed to converge");
    return left + right + err / 15.0;
  }
  return simpson_recurse<T>(f, a, lm, c, fa, flm, fc, left, 0.5 * tol,
                            depth - 1) +
         simpson_recurse<T>(f, c, rm, b, fc, frm, fb, right, 0.5 * tol,
                            depth - 1);
}

}  // namespace detail

/// Adaptive Simpson quadrature of f over [a, b] to absolute tolerance tol.
template <class T = double, class F>
T adaptive_simpson(F&& f, double a, double b, double tol, int max_depth = 32) {
  if (a == b) return T{};
  double c = 0.5 * (a + b);
  T fa = f(a), fc = f(c), fb = f(b);
  T whole = (fa + 4.0 * fc + fb) * ((b - a) / 6.0);
  return detail::simpson_recurse<T>(f, a, c, b, fa, fc, fb, whole, tol,
                                    max_depth);
}

/// Running integral F(ts[i]) = int_{ts[0]}^{ts[i]} f, one adaptive Simpson
/// panel per grid interval. tol_per_unit is the allowed error per unit time.
template <class T = double, class F>
std::vector<T> cumulative_integral(F&& f, std::span<const double> ts,
                                   double tol_per_unit) {
  std::vector<T> out(ts.size());
  if (ts.empty()) return out;
  out[0] = T{};
  for (std::size_t i = 1; i < ts.size(); ++i) {
    double len = ts[i] - ts[i - 1];
    out[i] = out[i - 1] +
             adaptive_simpson<T>(f, ts[i - 1], ts[i], tol_per_unit * len);
  }
  return out;
}

/// Composite Simpson over already-sampled values (uniform or not); falls back
/// to a trapezoid on the last interval when the sample count is even.
double simpson_sampled(std::span<const double> ts, std::span<const double> vs);

}  // namespace ltvstab
