#pragma once

// Polytope domains K = {w : a_i^T w >= b_i} with unit-norm constraint rows.

#include <iosfwd>
#include <string>

#include "barons/linalg.hpp"

namespace barons {

class Polytope {
 public:
  /// Normalizes each row of `a_raw` (and the matching offset) to unit norm.
  /// Throws ZeroRow for a vanishing row and InfeasibleWitness unless every
  /// slack of `witness` is strictly positive after normalization.
  Polytope(const Matrix& a_raw, const Vector& b_raw, const Vector& witness);

  const Matrix& normals() const noexcept { return a_; }
  const Vector& offsets() const noexcept { return b_; }
  const Vector& witness() const noexcept { return witness_; }

  Eigen::Index num_constraints() const noexcept { return a_.rows(); }
  Eigen::Index dimension() const noexcept { return a_.cols(); }

 private:
  Matrix a_;
  Vector b_;
  Vector witness_;
};

/// s = A w - b.
Vector slacks(const Polytope& p, const Vector& w);

/// min_i slack_i > margin.
bool is_strictly_feasible(const Polytope& p, const Vector& w, double margin = 0.0);

/// (1 - c) w + c w_star: maps K onto the shrunk set K_c.
Vector shrink_toward(const Vector& w, double c, const Vector& w_star);

/// [lo, hi]^d. Rows: the d lower bounds, then the d upper bounds.
Polytope build_box(int d, double lo, double hi);

/// {v in R^{d-1} : v >= 0, sum(v) <= 1}, the simplex over d assets in
/// coordinates that drop the last weight. Witness is the barycenter.
Polytope build_reduced_simplex(int d);

/// Reduced-simplex point -> full distribution (v, 1 - sum(v)).
Vector lift_reduced_simplex(const Vector& reduced);

/// Text format: "m d", then m rows of "a_i1 .. a_id b_i", then the witness.
Polytope read_polytope(std::istream& in);
Polytope read_polytope_file(const std::string& path);
void write_polytope(std::ostream& out, const Polytope& p);

}  // namespace barons
