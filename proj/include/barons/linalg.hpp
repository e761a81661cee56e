#pragma once

// Dense symmetric positive definite linear algebra: Cholesky factors, solves,
// Hessian-weighted norms and spectral comparisons between two SPD matrices.

#include <Eigen/Cholesky>
#include <Eigen/Core>

namespace barons {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Cholesky factorization M = L L^T of a symmetric positive definite matrix.
///
/// The inverse of M is only ever represented through this factor. Pivots
/// below 1e-14 * trace(M) / d are rejected so that a matrix evaluated at a
/// point numerically on the boundary is reported instead of silently used.
class SpdFactor {
 public:
  /// Throws NotSpd when M is not symmetric (1e-12 relative) or a pivot is
  /// too small.
  static SpdFactor factorize(const Matrix& m);

  Eigen::Index dimension() const noexcept { return llt_.rows(); }

  /// Solves M x = v.
  Vector solve(const Vector& v) const;

  /// Returns L^{-1} v, so that |L^{-1} v|^2 = v^T M^{-1} v.
  Vector whiten(const Vector& v) const;

  /// Returns L v; maps a standard normal sample to one with covariance M.
  Vector color(const Vector& v) const;

  Matrix lower() const { return llt_.matrixL(); }
  Matrix reconstruct() const { return llt_.reconstructedMatrix(); }
  double log_det() const noexcept { return log_det_; }

 private:
  explicit SpdFactor(Eigen::LLT<Matrix> llt);

  Eigen::LLT<Matrix> llt_;
  double log_det_ = 0.0;
};

inline SpdFactor spd_factorize(const Matrix& m) { return SpdFactor::factorize(m); }
Vector spd_solve(const SpdFactor& f, const Vector& v);

/// sqrt(v^T M v).
double quad_norm(const Vector& v, const Matrix& m);
double quad_norm(const Vector& v, const SpdFactor& f);

/// sqrt(v^T M^{-1} v), the dual of quad_norm.
double dual_quad_norm(const Vector& v, const SpdFactor& f);

/// Eigenvalues of the pencil (H, M), i.e. of L^{-1} H L^{-T} with M = L L^T,
/// sorted ascending.
Vector generalized_eigenvalues(const Matrix& h, const Matrix& m);

/// True iff (1 - alpha) M <= H <= (1 + alpha) M in the Loewner order, with
/// 1e-9 slack on the generalized eigenvalues.
bool spectral_sandwich_check(const Matrix& h, const Matrix& m, double alpha);

/// Max absolute asymmetry relative to max(1, max |m_ij|).
double relative_asymmetry(const Matrix& m);

}  // namespace barons
