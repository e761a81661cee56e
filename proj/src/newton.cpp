#include "barons/newton.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace barons {

ShiftedObjective::ShiftedObjective(BarrierPtr barrier, Vector shift)
    : barrier_(std::move(barrier)), shift_(std::move(shift)) {
  if (!barrier_) throw Error("shifted objective: null barrier");
  if (shift_.size() != barrier_->dimension()) {
    throw DimensionMismatch("shifted objective", barrier_->dimension(), shift_.size());
  }
}

ShiftedObjective::ShiftedObjective(BarrierPtr barrier)
    : ShiftedObjective(barrier, Vector::Zero(barrier ? barrier->dimension() : 0)) {}

double newton_decrement(const ShiftedObjective& obj, const Vector& w) {
  const SpdFactor f = SpdFactor::factorize(obj.hessian(w));
  return dual_quad_norm(obj.gradient(w), f);
}

NewtonResult damped_newton_minimize(const SelfConcordantObjective& obj, const Vector& w0,
                                    double tol, int max_iter) {
  if (!obj.in_domain(w0)) throw NotInterior("damped newton: start point not interior");
  const double m = obj.M;

  NewtonResult best{w0, std::numeric_limits<double>::infinity(), 0};
  Vector w = w0;
  for (int it = 0; it <= max_iter; ++it) {
    const Vector g = obj.gradient(w);
    const SpdFactor f = SpdFactor::factorize(obj.hessian(w));
    const Vector step = f.solve(g);
    const double lambda = std::sqrt(std::max(0.0, g.dot(step)));
    if (lambda < best.decrement) best = {w, lambda, it};
    if (lambda <= tol) return {w, lambda, it};
    if (it == max_iter) break;

    double t = lambda >= 1.0 / (4.0 * m) ? 1.0 / (1.0 + m * lambda) : 1.0;
    Vector next = w - t * step;
    // The Dikin bound already keeps `next` inside; halving only absorbs round-off.
    for (int k = 0; k < 60 && !obj.in_domain(next); ++k) {
      t *= 0.5;
      next = w - t * step;
    }
    if (!obj.in_domain(next)) break;
    w = std::move(next);
  }
  throw MaxIterExceeded("damped newton: decrement " + std::to_string(best.decrement) +
                            " above tolerance " + std::to_string(tol) + " after " +
                            std::to_string(max_iter) + " iterations",
                        best);
}

NewtonResult damped_newton_minimize(const ShiftedObjective& obj, const Vector& w0, double tol,
                                    int max_iter) {
  SelfConcordantObjective generic{
      [&obj](const Vector& w) { return obj.gradient(w); },
      [&obj](const Vector& w) { return obj.hessian(w); },
      [&obj](const Vector& w) { return obj.barrier().is_interior(w); },
      obj.M(),
  };
  return damped_newton_minimize(generic, w0, tol, max_iter);
}

Vector analytic_center(const BarrierPtr& barrier, const Vector& w0) {
  return damped_newton_minimize(ShiftedObjective(barrier), w0, kDefaultNewtonTol).w;
}

Vector approx_newton_step(const Vector& w, const SpdFactor& h_factor, const Vector& grad_tilde) {
  if (w.size() != h_factor.dimension()) {
    throw DimensionMismatch("approx_newton_step", h_factor.dimension(), w.size());
  }
  return w - h_factor.solve(grad_tilde);
}

}  // namespace barons
