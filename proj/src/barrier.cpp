#include "barons/barrier.hpp"

#include <cmath>
#include <string>

#include "barons/errors.hpp"

namespace barons {

namespace {

Vector interior_slacks(const Polytope& p, const Vector& w) {
  Vector s = slacks(p, w);
  if (!s.allFinite() || !(s.minCoeff() > 0.0)) {
    throw NotInterior("point is not strictly interior (min slack " +
                      std::to_string(s.size() ? s.minCoeff() : 0.0) + ")");
  }
  return s;
}

}  // namespace

double log_barrier_value(const Polytope& p, const Vector& w) {
  return -interior_slacks(p, w).array().log().sum();
}

Vector log_barrier_gradient(const Polytope& p, const Vector& w) {
  const Vector s = interior_slacks(p, w);
  return -p.normals().transpose() * s.cwiseInverse();
}

Matrix log_barrier_hessian(const Polytope& p, const Vector& w) {
  const Vector s = interior_slacks(p, w);
  const Matrix scaled = s.cwiseInverse().asDiagonal() * p.normals();  // S^{-1} A
  Matrix h = scaled.transpose() * scaled;
  return 0.5 * (h + h.transpose());
}

BarrierParams barrier_params_log(const Polytope& p) {
  return {1.0, static_cast<double>(p.num_constraints())};
}

HybridBarrier::HybridBarrier(BarrierPtr psi, double nu, double radius)
    : psi_(std::move(psi)), nu_(nu), weight_(nu / (radius * radius)) {
  if (!psi_) throw Error("hybrid barrier: null inner barrier");
  if (!(nu > 0.0) || !(radius > 0.0)) throw Error("hybrid barrier: nu and R must be positive");
}

double HybridBarrier::value(const Vector& w) const {
  return psi_->value(w) + 0.5 * weight_ * w.squaredNorm();
}

Vector HybridBarrier::gradient(const Vector& w) const {
  return psi_->gradient(w) + weight_ * w;
}

Matrix HybridBarrier::hessian(const Vector& w) const {
  Matrix h = psi_->hessian(w);
  h.diagonal().array() += weight_;
  return h;
}

BarrierPtr make_log_barrier(const Polytope& p) { return std::make_shared<LogBarrier>(p); }

BarrierPtr hybrid_compose(BarrierPtr psi, double nu, double radius) {
  return std::make_shared<HybridBarrier>(std::move(psi), nu, radius);
}

Oracle::Oracle(BarrierPtr barrier, OracleConfig cfg)
    : barrier_(std::move(barrier)), cfg_(cfg), rng_(cfg.seed) {
  if (!barrier_) throw Error("oracle: null barrier");
  if (!(cfg_.eps >= 0.0)) throw Error("oracle: eps must be >= 0");
  if (!(cfg_.alpha >= 0.0 && cfg_.alpha < 1.0)) throw Error("oracle: alpha must lie in [0, 1)");
}

Vector Oracle::gradient(const Vector& w) {
  barrier_->counters().gradient_calls.fetch_add(1, std::memory_order_relaxed);
  Vector g = barrier_->gradient(w);
  if (cfg_.noise == NoiseMode::Off || cfg_.eps == 0.0) return g;

  // e = eps * L z / |z| has e^T (L L^T)^{-1} e = eps^2 exactly.
  const SpdFactor f = SpdFactor::factorize(barrier_->hessian(w));
  std::normal_distribution<double> normal;
  Vector z(g.size());
  do {
    for (auto& zi : z) zi = normal(rng_);
  } while (z.norm() == 0.0);
  g += cfg_.eps * f.color(z / z.norm());
  return g;
}

HessianApprox Oracle::hessian(const Vector& w) {
  barrier_->counters().hessian_calls.fetch_add(1, std::memory_order_relaxed);
  Matrix h = barrier_->hessian(w);
  if (cfg_.noise == NoiseMode::Adversarial && cfg_.alpha > 0.0) {
    const double sign = std::bernoulli_distribution(0.5)(rng_) ? 1.0 : -1.0;
    h *= 1.0 + sign * cfg_.alpha;
  }
  SpdFactor f = SpdFactor::factorize(h);
  return {std::move(h), std::move(f)};
}

}  // namespace barons
