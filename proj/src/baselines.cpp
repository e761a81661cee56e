#include "barons/baselines.hpp"

#include <algorithm>
#include <functional>
#include <vector>

#include "barons/newton.hpp"

namespace barons {

Vector ftrl_exact_round(const BarrierPtr& barrier, const Vector& s, const Vector& w_prev) {
  return damped_newton_minimize(ShiftedObjective(barrier, s), w_prev, kFtrlTol).w;
}

Vector project_simplex(const Vector& v) {
  const Eigen::Index n = v.size();
  if (n == 0) return v;
  std::vector<double> sorted(v.data(), v.data() + n);
  std::sort(sorted.begin(), sorted.end(), std::greater<>());

  // theta = (sum of the k largest - 1) / k for the largest k with a positive gap.
  double running = 0.0;
  double theta = 0.0;
  for (Eigen::Index k = 0; k < n; ++k) {
    running += sorted[k];
    const double candidate = (running - 1.0) / static_cast<double>(k + 1);
    if (sorted[k] - candidate > 0.0) theta = candidate;
  }
  return (v.array() - theta).cwiseMax(0.0).matrix();
}

Vector ogd_simplex_round(const Vector& w, const Vector& g, double step) {
  return project_simplex(w - step * g);
}

}  // namespace barons
