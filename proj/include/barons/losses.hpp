#pragma once

// Loss families and deterministic loss generators.

#include <cstdint>
#include <memory>
#include <random>
#include <variant>

#include "barons/linalg.hpp"

namespace barons {

/// l(w) = <g, w>.
struct LinearLoss {
  Vector g;
};

/// l(w) = -ln(<lift(w), r>) with w in reduced simplex coordinates.
struct PortfolioReturns {
  Vector r;
};

/// l(w) = -ln(<w, x>) if y = +1, -ln(1 - <w, x>) if y = -1.
struct LabeledExample {
  Vector x;
  int y = 1;
};

using LossRecord = std::variant<LinearLoss, PortfolioReturns, LabeledExample>;

struct LossEvent {
  double loss = 0.0;
  Vector g;  // subgradient at the queried point
};

LossEvent portfolio_loss(const Vector& w_reduced, const Vector& r);
LossEvent logloss_linear(const Vector& w, const Vector& x, int y);
LossEvent linear_loss(const Vector& w, const Vector& g);

/// Gradient of -ln(<w, r>) in full simplex coordinates.
Vector portfolio_full_gradient(const Vector& w_full, const Vector& r);

LossEvent evaluate(const LossRecord& rec, const Vector& w);
double loss_value(const LossRecord& rec, const Vector& w);
/// Hessian of the loss at w (zero for linear losses).
Matrix loss_hessian(const LossRecord& rec, const Vector& w);

/// Oblivious loss sequence; each call to next() yields the loss of the next round.
class LossStream {
 public:
  virtual ~LossStream() = default;
  virtual LossRecord next() = 0;
  virtual Eigen::Index dimension() const = 0;
};

/// Returns drawn i.i.d. uniform on [lo, hi] per asset. Losses live on the
/// reduced simplex of dimension d - 1.
std::unique_ptr<LossStream> returns_iid(std::uint64_t seed, int d, double lo, double hi);

/// Two assets, r alternating (2, 1/2), (1/2, 2), ...
std::unique_ptr<LossStream> returns_two_asset_adversarial(std::uint64_t seed);

/// Linear losses with g uniform on the sphere of radius G in R^d.
std::unique_ptr<LossStream> linear_adversary_iid_sphere(std::uint64_t seed, int d, double G);

/// Linear losses g = 0.
std::unique_ptr<LossStream> linear_zero(int d);

/// Features uniform on the simplex in R^d; P(y = +1 | x) = <theta, x> for a
/// hidden theta drawn from [0.1, 0.9]^d.
std::unique_ptr<LossStream> labels_logistic(std::uint64_t seed, int d);

}  // namespace barons
