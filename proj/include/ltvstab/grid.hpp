#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace ltvstab {

/// Uniform sample grid on [t0, T], the finite-horizon proxy for t -> +inf.
struct Grid {
  double t0 = 0.0;
  double T = 60.0;
  int n = 1024;  // sample count, endpoints included

  void validate() const {
    if (!(T > t0)) throw std::invalid_argument("grid: T must exceed t0");
    if (n < 64) throw std::invalid_argument("grid: need at least 64 samples");
  }

  double spacing() const { return (T - t0) / (n - 1); }

  std::vector<double> times() const {
    std::vector<double> ts(n);
    double h = spacing();
    for (int i = 0; i < n; ++i) ts[i] = t0 + h * i;
    ts.back() = T;
    return ts;
  }

  /// Same spacing, twice the horizon.
  Grid doubled() const { return Grid{t0, t0 + 2.0 * (T - t0), 2 * n - 1}; }
};

/// Sampled real-valued function of time.
struct Trace {
  std::vector<double> ts;
  std::vector<double> vs;
};

enum class ConditionStatus { Holds, Fails, Inconclusive };

std::string to_string(ConditionStatus s);

/// Three-valued outcome of one checked condition with a scalar piece of
/// numeric evidence and a short explanation.
struct ConditionOutcome {
  ConditionStatus status = ConditionStatus::Inconclusive;
  double summary = 0.0;
  std::string note;
};

}  // namespace ltvstab
