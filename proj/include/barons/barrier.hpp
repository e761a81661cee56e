#pragma once

// Self-concordant barriers and the tolerance-tagged gradient/Hessian oracles
// that the online algorithm queries.

#include <atomic>
#include <cstdint>
#include <memory>
#include <random>

#include "barons/domain.hpp"
#include "barons/linalg.hpp"

namespace barons {

/// (M, nu): self-concordance constant and barrier parameter.
struct BarrierParams {
  double M = 1.0;
  double nu = 1.0;
};

/// Per-barrier call counters for the gradient and Hessian oracles.
struct OracleCounters {
  std::atomic<std::uint64_t> gradient_calls{0};
  std::atomic<std::uint64_t> hessian_calls{0};
};

class Barrier {
 public:
  Barrier() = default;
  Barrier(const Barrier&) = delete;
  Barrier& operator=(const Barrier&) = delete;
  virtual ~Barrier() = default;

  virtual const Polytope& domain() const = 0;
  virtual BarrierParams params() const = 0;

  // All three throw NotInterior unless w is strictly inside the domain.
  virtual double value(const Vector& w) const = 0;
  virtual Vector gradient(const Vector& w) const = 0;
  virtual Matrix hessian(const Vector& w) const = 0;

  Eigen::Index dimension() const { return domain().dimension(); }
  bool is_interior(const Vector& w) const { return is_strictly_feasible(domain(), w, 0.0); }

  OracleCounters& counters() const noexcept { return counters_; }

 private:
  mutable OracleCounters counters_;
};

using BarrierPtr = std::shared_ptr<const Barrier>;

// Log-barrier Phi(w) = -sum_i ln(a_i^T w - b_i).
double log_barrier_value(const Polytope& p, const Vector& w);
Vector log_barrier_gradient(const Polytope& p, const Vector& w);
Matrix log_barrier_hessian(const Polytope& p, const Vector& w);
BarrierParams barrier_params_log(const Polytope& p);

class LogBarrier final : public Barrier {
 public:
  explicit LogBarrier(Polytope p) : polytope_(std::move(p)) {}

  const Polytope& domain() const override { return polytope_; }
  BarrierParams params() const override { return barrier_params_log(polytope_); }
  double value(const Vector& w) const override { return log_barrier_value(polytope_, w); }
  Vector gradient(const Vector& w) const override { return log_barrier_gradient(polytope_, w); }
  Matrix hessian(const Vector& w) const override { return log_barrier_hessian(polytope_, w); }

 private:
  Polytope polytope_;
};

/// Psi(w) + (nu / (2 R^2)) |w|^2, centered at the origin. Keeps Psi's
/// self-concordance constant and reports (M_Psi, nu).
class HybridBarrier final : public Barrier {
 public:
  HybridBarrier(BarrierPtr psi, double nu, double radius);

  const Polytope& domain() const override { return psi_->domain(); }
  BarrierParams params() const override { return {psi_->params().M, nu_}; }
  double value(const Vector& w) const override;
  Vector gradient(const Vector& w) const override;
  Matrix hessian(const Vector& w) const override;

  double quadratic_weight() const noexcept { return weight_; }
  const Barrier& inner() const noexcept { return *psi_; }

 private:
  BarrierPtr psi_;
  double nu_;
  double weight_;  // nu / R^2
};

BarrierPtr make_log_barrier(const Polytope& p);
BarrierPtr hybrid_compose(BarrierPtr psi, double nu, double radius);

enum class NoiseMode { Off, Adversarial };

struct OracleConfig {
  double eps = 0.0;    // gradient tolerance, dual local norm
  double alpha = 0.0;  // Hessian spectral tolerance
  NoiseMode noise = NoiseMode::Off;
  std::uint64_t seed = 0;
};

struct HessianApprox {
  Matrix h;
  SpdFactor factor;
};

/// Gradient and Hessian oracles over a barrier.
///
/// With noise off both return exact quantities. In adversarial mode the
/// gradient is perturbed by a random direction of dual local norm exactly
/// `eps`, and the Hessian is scaled by (1 +/- alpha) with a random sign, so
/// every answer sits on the boundary of its tolerance.
class Oracle {
 public:
  Oracle(BarrierPtr barrier, OracleConfig cfg);

  Vector gradient(const Vector& w);
  HessianApprox hessian(const Vector& w);

  const OracleConfig& config() const noexcept { return cfg_; }
  const Barrier& barrier() const noexcept { return *barrier_; }
  const BarrierPtr& barrier_ptr() const noexcept { return barrier_; }

 private:
  BarrierPtr barrier_;
  OracleConfig cfg_;
  std::mt19937_64 rng_;
};

}  // namespace barons
