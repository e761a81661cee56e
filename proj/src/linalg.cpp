#include "barons/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <string>

#include "barons/errors.hpp"

namespace barons {

namespace {

constexpr double kSymmetryTol = 1e-12;
constexpr double kPivotTol = 1e-14;

void require_dim(const char* what, Eigen::Index expected, Eigen::Index got) {
  if (expected != got) throw DimensionMismatch(what, expected, got);
}

}  // namespace

double relative_asymmetry(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  return (m - m.transpose()).cwiseAbs().maxCoeff() / scale;
}

SpdFactor::SpdFactor(Eigen::LLT<Matrix> llt) : llt_(std::move(llt)) {
  const auto diag = llt_.matrixLLT().diagonal();
  log_det_ = 2.0 * diag.array().log().sum();
}

SpdFactor SpdFactor::factorize(const Matrix& m) {
  if (m.rows() != m.cols()) throw DimensionMismatch("spd_factorize (square)", m.rows(), m.cols());
  if (m.rows() == 0) throw NotSpd("spd_factorize: empty matrix");
  if (!m.allFinite()) throw NotSpd("spd_factorize: non-finite entries");
  if (relative_asymmetry(m) > kSymmetryTol) {
    throw NotSpd("spd_factorize: matrix is not symmetric");
  }
  Eigen::LLT<Matrix> llt(m);
  if (llt.info() != Eigen::Success) throw NotSpd("spd_factorize: non-positive pivot");

  const double floor = kPivotTol * m.trace() / static_cast<double>(m.rows());
  const auto diag = llt.matrixLLT().diagonal();
  for (Eigen::Index i = 0; i < diag.size(); ++i) {
    const double pivot = diag[i] * diag[i];
    if (!(pivot > floor)) {
      throw NotSpd("spd_factorize: pivot " + std::to_string(i) + " below tolerance");
    }
  }
  return SpdFactor(std::move(llt));
}

Vector SpdFactor::solve(const Vector& v) const {
  require_dim("spd_solve", dimension(), v.size());
  return llt_.solve(v);
}

Vector SpdFactor::whiten(const Vector& v) const {
  require_dim("whiten", dimension(), v.size());
  return llt_.matrixL().solve(v);
}

Vector SpdFactor::color(const Vector& v) const {
  require_dim("color", dimension(), v.size());
  return llt_.matrixL() * v;
}

Vector spd_solve(const SpdFactor& f, const Vector& v) { return f.solve(v); }

double quad_norm(const Vector& v, const Matrix& m) {
  require_dim("quad_norm", m.rows(), v.size());
  const double q = v.dot(m * v);
  if (q < 0.0) {
    // Round-off can produce tiny negatives for v ~ 0; anything else means M is indefinite.
    if (q < -1e-12 * std::max(1.0, v.squaredNorm() * m.cwiseAbs().maxCoeff())) {
      throw NotSpd("quad_norm: indefinite matrix");
    }
    return 0.0;
  }
  return std::sqrt(q);
}

double quad_norm(const Vector& v, const SpdFactor& f) {
  require_dim("quad_norm", f.dimension(), v.size());
  return (f.lower().transpose() * v).norm();
}

double dual_quad_norm(const Vector& v, const SpdFactor& f) { return f.whiten(v).norm(); }

Vector generalized_eigenvalues(const Matrix& h, const Matrix& m) {
  require_dim("generalized_eigenvalues", m.rows(), h.rows());
  require_dim("generalized_eigenvalues", m.cols(), h.cols());
  const SpdFactor fm = SpdFactor::factorize(m);
  const Matrix l = fm.lower();
  // C = L^{-1} H L^{-T}
  Matrix c = l.triangularView<Eigen::Lower>().solve(h);
  c = l.triangularView<Eigen::Lower>().solve(c.transpose()).transpose();
  c = 0.5 * (c + c.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(c, Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

bool spectral_sandwich_check(const Matrix& h, const Matrix& m, double alpha) {
  // H must itself be SPD for the comparison to be meaningful.
  (void)SpdFactor::factorize(h);
  const Vector ev = generalized_eigenvalues(h, m);
  constexpr double slack = 1e-9;
  return ev.minCoeff() >= 1.0 - alpha - slack && ev.maxCoeff() <= 1.0 + alpha + slack;
}

}  // namespace barons
