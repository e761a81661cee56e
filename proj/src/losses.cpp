#include "barons/losses.hpp"

#include <cmath>

#include "barons/errors.hpp"

namespace barons {

namespace {

template <class... Fs>
struct Overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
Overloaded(Fs...) -> Overloaded<Fs...>;

}  // namespace

LossEvent portfolio_loss(const Vector& w_reduced, const Vector& r) {
  if (r.size() != w_reduced.size() + 1) {
    throw DimensionMismatch("portfolio_loss returns", w_reduced.size() + 1, r.size());
  }
  if (!(r.minCoeff() > 0.0)) throw NonPositiveReturn("portfolio_loss: returns must be positive");
  const Eigen::Index k = w_reduced.size();
  const double r_last = r[k];
  const Vector excess = r.head(k).array() - r_last;
  const double wealth = r_last + w_reduced.dot(excess);
  if (!(wealth > 0.0)) throw NotInterior("portfolio_loss: non-positive portfolio return");
  return {-std::log(wealth), -excess / wealth};
}

Vector portfolio_full_gradient(const Vector& w_full, const Vector& r) {
  if (r.size() != w_full.size()) throw DimensionMismatch("portfolio gradient", w_full.size(), r.size());
  const double wealth = w_full.dot(r);
  if (!(wealth > 0.0)) throw NotInterior("portfolio gradient: non-positive portfolio return");
  return -r / wealth;
}

LossEvent logloss_linear(const Vector& w, const Vector& x, int y) {
  if (x.size() != w.size()) throw DimensionMismatch("logloss_linear", w.size(), x.size());
  if (y != 1 && y != -1) throw Error("logloss_linear: label must be +1 or -1");
  const double p = w.dot(x);
  if (!(p > 0.0 && p < 1.0)) {
    throw PredictionOutOfRange("logloss_linear: prediction " + std::to_string(p) + " outside (0, 1)");
  }
  if (y == 1) return {-std::log(p), -x / p};
  return {-std::log1p(-p), x / (1.0 - p)};
}

LossEvent linear_loss(const Vector& w, const Vector& g) {
  if (g.size() != w.size()) throw DimensionMismatch("linear_loss", w.size(), g.size());
  return {g.dot(w), g};
}

LossEvent evaluate(const LossRecord& rec, const Vector& w) {
  return std::visit(
      Overloaded{
          [&](const LinearLoss& l) { return linear_loss(w, l.g); },
          [&](const PortfolioReturns& p) { return portfolio_loss(w, p.r); },
          [&](const LabeledExample& e) { return logloss_linear(w, e.x, e.y); },
      },
      rec);
}

double loss_value(const LossRecord& rec, const Vector& w) { return evaluate(rec, w).loss; }

Matrix loss_hessian(const LossRecord& rec, const Vector& w) {
  return std::visit(
      Overloaded{
          [&](const LinearLoss& l) -> Matrix { return Matrix::Zero(l.g.size(), l.g.size()); },
          [&](const PortfolioReturns& p) -> Matrix {
            const LossEvent ev = portfolio_loss(w, p.r);
            return ev.g * ev.g.transpose();
          },
          [&](const LabeledExample& e) -> Matrix {
            const LossEvent ev = logloss_linear(w, e.x, e.y);
            return ev.g * ev.g.transpose();
          },
      },
      rec);
}

namespace {

class ReturnsIid final : public LossStream {
 public:
  ReturnsIid(std::uint64_t seed, int d, double lo, double hi) : rng_(seed), d_(d), dist_(lo, hi) {}
  LossRecord next() override {
    Vector r(d_);
    for (auto& ri : r) ri = dist_(rng_);
    return PortfolioReturns{std::move(r)};
  }
  Eigen::Index dimension() const override { return d_ - 1; }

 private:
  std::mt19937_64 rng_;
  int d_;
  std::uniform_real_distribution<double> dist_;
};

class TwoAsset final : public LossStream {
 public:
  LossRecord next() override {
    Vector r(2);
    if (odd_) r << 2.0, 0.5;
    else r << 0.5, 2.0;
    odd_ = !odd_;
    return PortfolioReturns{std::move(r)};
  }
  Eigen::Index dimension() const override { return 1; }

 private:
  bool odd_ = true;
};

class LinearSphere final : public LossStream {
 public:
  LinearSphere(std::uint64_t seed, int d, double radius) : rng_(seed), d_(d), radius_(radius) {}
  LossRecord next() override {
    Vector g(d_);
    do {
      for (auto& gi : g) gi = normal_(rng_);
    } while (g.norm() == 0.0);
    g *= radius_ / g.norm();
    return LinearLoss{std::move(g)};
  }
  Eigen::Index dimension() const override { return d_; }

 private:
  std::mt19937_64 rng_;
  int d_;
  double radius_;
  std::normal_distribution<double> normal_;
};

class LinearZero final : public LossStream {
 public:
  explicit LinearZero(int d) : d_(d) {}
  LossRecord next() override { return LinearLoss{Vector::Zero(d_)}; }
  Eigen::Index dimension() const override { return d_; }

 private:
  int d_;
};

class LabelsLogistic final : public LossStream {
 public:
  LabelsLogistic(std::uint64_t seed, int d) : rng_(seed), d_(d), theta_(d) {
    std::uniform_real_distribution<double> u(0.1, 0.9);
    for (auto& th : theta_) th = u(rng_);
  }
  LossRecord next() override {
    // Normalized exponentials are uniform on the simplex.
    Vector x(d_);
    for (auto& xi : x) xi = exp_(rng_);
    x /= x.sum();
    const bool positive = std::bernoulli_distribution(theta_.dot(x))(rng_);
    return LabeledExample{std::move(x), positive ? 1 : -1};
  }
  Eigen::Index dimension() const override { return d_; }

 private:
  std::mt19937_64 rng_;
  int d_;
  Vector theta_;
  std::exponential_distribution<double> exp_{1.0};
};

}  // namespace

std::unique_ptr<LossStream> returns_iid(std::uint64_t seed, int d, double lo, double hi) {
  if (d < 2) throw Error("returns_iid: need at least two assets");
  if (!(lo > 0.0) || !(hi >= lo)) throw Error("returns_iid: need 0 < lo <= hi");
  return std::make_unique<ReturnsIid>(seed, d, lo, hi);
}

std::unique_ptr<LossStream> returns_two_asset_adversarial(std::uint64_t /*seed*/) {
  return std::make_unique<TwoAsset>();
}

std::unique_ptr<LossStream> linear_adversary_iid_sphere(std::uint64_t seed, int d, double G) {
  if (d < 1 || !(G >= 0.0)) throw Error("linear_adversary_iid_sphere: bad parameters");
  return std::make_unique<LinearSphere>(seed, d, G);
}

std::unique_ptr<LossStream> linear_zero(int d) { return std::make_unique<LinearZero>(d); }

std::unique_ptr<LossStream> labels_logistic(std::uint64_t seed, int d) {
  if (d < 1) throw Error("labels_logistic: bad dimension");
  return std::make_unique<LabelsLogistic>(seed, d);
}

}  // namespace barons
