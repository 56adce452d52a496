#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "ltvstab/expr.hpp"
#include "ltvstab/grid.hpp"
#include "ltvstab/reduction.hpp"

namespace ltvstab {

/// 2x2 complex matrix, the state of the fundamental-matrix integration.
struct Mat2c {
  Complex m11{}, m12{}, m21{}, m22{};

  static Mat2c identity() { return {{1, 0}, {0, 0}, {0, 0}, {1, 0}}; }
  Complex det() const { return m11 * m22 - m12 * m21; }
  /// Spectral norm via the closed-form singular values; scaled to stay finite
  /// for very large entries.
  double spectral_norm() const;
  double max_abs() const;
};

Mat2c operator*(const Mat2c& x, const Mat2c& y);
Mat2c operator-(const Mat2c& x, const Mat2c& y);

struct IntegratorError : std::runtime_error {
  IntegratorError(const std::string& msg, double where)
      : std::runtime_error(msg), t(where) {}
  double t;  // location of the failure
};

struct OdeOptions {
  double rtol = 1e-8;
  double atol = 1e-10;
  double hmin_rel = 1e-13;  // step underflow threshold, relative to the span
  // Ceiling on the step size, step_cap_scale * sqrt(rtol) time units. Tightens
  // superlinearly with rtol so halving rtol reduces terminal error by >= 4x.
  double step_cap_scale = 10.0;
  long max_steps = 50'000'000;
};

/// Phi(t) on the grid with Phi(t0) = I, plus M(t)Phi(t) at each sample for
/// dense evaluation between samples. If the norm overflow guard triggered,
/// truncated_at holds the last integrated time and the arrays stop there.
struct FundamentalMatrix {
  std::vector<double> ts;
  std::vector<Mat2c> phi;
  std::vector<Mat2c> phi_dot;
  std::optional<double> truncated_at;
};

FundamentalMatrix integrate_fundamental(const SystemSpec& sys,
                                        const Grid& grid,
                                        const OdeOptions& opts = {});

/// Trajectory of (phi, phi') for the scalar equation in companion form.
struct ScalarTrajectory {
  std::vector<double> ts;
  std::vector<Complex> phi, dphi;
  std::vector<Complex> phi_dot, dphi_dot;  // stored derivatives at samples
};

ScalarTrajectory integrate_scalar(const ScalarEquation& eq, Complex phi0,
                                  Complex dphi0, const Grid& grid,
                                  const OdeOptions& opts = {});

enum class RiccatiKind {
  Eq23,   // y' + b y^2 + A y - c = 0
  Eq24,   // z' + c z^2 - A z - a = 0
  Eq28,   // u' + u^2 - P1 u + D1 = 0
  Eq210,  // v' + v^2 - P2 v + D2 = 0
  Eq218,  // w' + w^2 + G1 = 0
};

/// Riccati trajectory; samples stop at the escape time when the solution
/// blows up. Blow-up is data, not an error.
struct RiccatiTrajectory {
  std::vector<double> ts;
  std::vector<Complex> ys;
  std::vector<Complex> dys;  // right-hand side at each sample
  std::optional<double> blow_up_at;
};

RiccatiTrajectory integrate_riccati(RiccatiKind kind, const SystemSpec& sys,
                                    const ReducedSystem& red, Complex y0,
                                    const Grid& grid,
                                    const OdeOptions& opts = {},
                                    double escape_radius = 1e8);

struct CouplingError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Candidate solution pair rebuilt from Riccati trajectories u, v via
/// phi = phi1 exp(int u), psi = psi1 exp(int v). The initial data must satisfy
/// (u(t1)-a(t1))(v(t1)-d(t1)) = b(t1)c(t1) within coupling_tol.
struct SolutionPair {
  std::vector<double> ts;
  std::vector<Complex> phi, psi;
};

SolutionPair reconstruct_solution(const SystemSpec& sys,
                                  const RiccatiTrajectory& u,
                                  const RiccatiTrajectory& v, Complex phi1,
                                  Complex psi1, double coupling_tol = 1e-10);

enum class GrowthClass { Vanishing, Bounded, Unbounded, Ambiguous };

std::string to_string(GrowthClass g);

struct EmpiricalClass {
  GrowthClass cls = GrowthClass::Ambiguous;
  double growth_exponent = 0.0;  // least-squares tail slope of log ||Phi||
};

struct EmpiricalTols {
  double vanish_tol = 1e-3;
  double bound_cap = 1e6;
  double slope_tol = 1e-3;
  double lambda = 40.0;
};

/// Integrate on the grid doubled `horizon_doublings` times and classify the
/// growth of ||Phi|| from the tail of the largest horizon; the last two
/// horizons must agree or the class degrades to Ambiguous.
EmpiricalClass empirical_classify(const SystemSpec& sys, const Grid& grid,
                                  int horizon_doublings,
                                  const OdeOptions& opts = {},
                                  const EmpiricalTols& tols = {});

/// max over samples of |det Phi - exp int S| / exp int Re S (Liouville).
double liouville_max_residual(const FundamentalMatrix& fm,
                              const SystemSpec& sys, double quad_tol = 1e-12);

/// Cubic Hermite midpoint evaluations used by the consistency tests: value
/// and derivative of the interpolant at the midpoint of [t0, t1].
struct HermiteMid {
  Complex value;
  Complex derivative;
};
HermiteMid hermite_midpoint(Complex y0, Complex f0, Complex y1, Complex f1,
                            double h);

}  // namespace ltvstab
