#pragma once

// Reference algorithms: exact follow-the-regularized-leader with the barrier
// as regularizer, and projected online gradient descent on the simplex.

#include "barons/barrier.hpp"

namespace barons {

inline constexpr double kFtrlTol = 1e-12;

/// argmin_w Phi(w) + <s, w>, warm-started from `w_prev`.
Vector ftrl_exact_round(const BarrierPtr& barrier, const Vector& s, const Vector& w_prev);

/// Euclidean projection onto {x >= 0, sum x = 1} (sort-based).
Vector project_simplex(const Vector& v);

/// project_simplex(w - step * g).
Vector ogd_simplex_round(const Vector& w, const Vector& g, double step);

}  // namespace barons
