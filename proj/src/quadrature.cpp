#include "ltvstab/quadrature.hpp"

#include "ltvstab/grid.hpp"

namespace ltvstab {

double simpson_sampled(std::span<const double> ts, std::span<const double> vs) {
  std::size_t n = ts.size();
  if (n < 2) return 0.0;
  double acc = 0.0;
  std::size_t i = 0;
  while (i + 2 < n) {
    double h1 = ts[i + 1] - ts[i], h2 = ts[i + 2] - ts[i + 1];
    double h = h1 + h2;
    // Simpson weights for possibly unequal panels
    double w0 = h * (2.0 * h1 - h2) / (6.0 * h1);
    double w1 = h * h * h / (6.0 * h1 * h2);
    double w2 = h * (2.0 * h2 - h1) / (6.0 * h2);
    acc += w0 * vs[i] + w1 * vs[i + 1] + w2 * vs[i + 2];
    i += 2;
  }
  if (i + 1 < n)  // odd interval left over
    acc += 0.5 * (ts[i + 1] - ts[i]) * (vs[i] + vs[i + 1]);
  return acc;
}

std::string to_string(ConditionStatus s) {
  switch (s) {
    case ConditionStatus::Holds: return "Holds";
    case ConditionStatus::Fails: return "Fails";
    case ConditionStatus::Inconclusive: return "Inconclusive";
  }
  return "Inconclusive";
}

}  // namespace ltvstab
