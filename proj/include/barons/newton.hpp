#pragma once

// Newton machinery on barrier-plus-linear objectives Phi(w) + <shift, w>.

#include <functional>

#include "barons/barrier.hpp"
#include "barons/errors.hpp"

namespace barons {

/// Phi(w) + <shift, w>. Shares Phi's Hessian and self-concordance constant.
class ShiftedObjective {
 public:
  ShiftedObjective(BarrierPtr barrier, Vector shift);
  explicit ShiftedObjective(BarrierPtr barrier);

  double value(const Vector& w) const { return barrier_->value(w) + shift_.dot(w); }
  Vector gradient(const Vector& w) const { return barrier_->gradient(w) + shift_; }
  Matrix hessian(const Vector& w) const { return barrier_->hessian(w); }

  const Barrier& barrier() const noexcept { return *barrier_; }
  const BarrierPtr& barrier_ptr() const noexcept { return barrier_; }
  const Vector& shift() const noexcept { return shift_; }
  double M() const { return barrier_->params().M; }

 private:
  BarrierPtr barrier_;
  Vector shift_;
};

/// |grad f(w)| measured in the inverse-Hessian norm at w.
double newton_decrement(const ShiftedObjective& obj, const Vector& w);

struct NewtonResult {
  Vector w;
  double decrement = 0.0;
  int iterations = 0;
};

class MaxIterExceeded : public Error {
 public:
  MaxIterExceeded(const std::string& what, NewtonResult best)
      : Error(what), best_(std::move(best)) {}
  const NewtonResult& best() const noexcept { return best_; }

 private:
  NewtonResult best_;
};

inline constexpr double kDefaultNewtonTol = 1e-10;
inline constexpr int kDefaultNewtonMaxIter = 500;

/// A self-concordant function given through callbacks; `in_domain` must be
/// false wherever the function is undefined.
struct SelfConcordantObjective {
  std::function<Vector(const Vector&)> gradient;
  std::function<Matrix(const Vector&)> hessian;
  std::function<bool(const Vector&)> in_domain;
  double M = 1.0;
};

NewtonResult damped_newton_minimize(const SelfConcordantObjective& obj, const Vector& w0,
                                    double tol = kDefaultNewtonTol,
                                    int max_iter = kDefaultNewtonMaxIter);

/// Damped Newton: step 1/(1 + M lambda) while lambda >= 1/(4M), full steps
/// after. Every iterate stays strictly interior. Stops once the decrement is
/// at most `tol`; throws MaxIterExceeded (carrying the best iterate) otherwise.
NewtonResult damped_newton_minimize(const ShiftedObjective& obj, const Vector& w0,
                                    double tol = kDefaultNewtonTol,
                                    int max_iter = kDefaultNewtonMaxIter);

/// argmin Phi, started from an interior point.
Vector analytic_center(const BarrierPtr& barrier, const Vector& w0);

/// w - H^{-1} grad_tilde.
Vector approx_newton_step(const Vector& w, const SpdFactor& h_factor, const Vector& grad_tilde);

}  // namespace barons
