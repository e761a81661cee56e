#pragma once

// Randomized property suites for the barrier, Newton and online-update
// inequalities, plus a strict-regime invariant run on a small instance.

#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "barons/barons.hpp"

namespace barons {

struct InequalityCount {
  std::string name;
  long passed = 0;
  long failed = 0;
};

struct CheckReport {
  std::string suite;
  int trials = 0;
  std::vector<InequalityCount> counts;
  /// Largest observed lhs - rhs over all comparisons (negative when all pass).
  double worst_gap = -std::numeric_limits<double>::infinity();
  /// JSON description of the first failing comparison, empty if none.
  std::string first_counterexample;

  bool ok() const;
};

/// Names accepted by run_check.
const std::vector<std::string>& check_suites();
bool is_check_suite(const std::string& name);

/// Throws std::invalid_argument for an unknown suite.
CheckReport run_check(const std::string& suite, std::uint64_t seed, int trials);

/// Random bounded polytope in R^d with m >= 2d unit-norm rows that contains
/// the origin strictly: a randomly rotated box plus extra random half-spaces.
Polytope random_polytope(std::mt19937_64& rng, int d, int m);

/// Random interior point: the origin moved a random fraction (at most
/// `max_fraction`) of the way to the boundary along a random direction.
Vector random_interior_point(std::mt19937_64& rng, const Polytope& p, double max_fraction = 0.99);

struct StrictRunOptions {
  long T = 2000;
  double b = 1.0;               // linear losses g_t = +/- b on [-1, 1]
  std::uint64_t seed = 1;
  double gap_constant = 4.0;    // C in |sum g^T (w_t - w_t*)| <= C eps sum |g_t|_local
};

struct StrictRunReport {
  BaronsParams params;
  long rounds = 0;
  long feasibility_violations = 0;
  long decrement_violations = 0;  // lambda(w_t, Phi_t) > lambda_target
  long proximity_violations = 0;  // |w_t - w_t*|_{H(w_t*)} above the bound
  long decay_checks = 0;
  long decay_violations = 0;      // inner-loop geometric decay
  long guard_events = 0;
  long landmark_updates = 0;
  double max_decrement = 0.0;
  double max_proximity = 0.0;
  double proximity_bound = 0.0;
  double linearized_gap = 0.0;     // sum_t g_t^T (w_t - w_t*)
  double gap_budget = 0.0;         // C eps sum_t |g_t|_local
  double barons_regret = 0.0;
  double ftrl_regret = 0.0;
};

/// Strict-mode BARONS with exact oracles on the interval [-1, 1] against
/// random-sign linear losses, with eta = 1/(1000 b M) and eps = 1/(20000 M).
/// Every round is monitored and compared with exact FTRL on the same losses.
StrictRunReport strict_invariant_run(const StrictRunOptions& opts);

}  // namespace barons
