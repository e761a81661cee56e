#include <cmath>

#include "barons/barrier.hpp"
#include "barons/errors.hpp"
#include "doctest.h"

using namespace barons;

namespace {
Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}
const Polytope kInterval = build_box(1, 0, 1);
const Polytope kUnitBox = build_box(2, 0, 1);
}  // namespace

TEST_CASE("log-barrier values") {
  CHECK(log_barrier_value(kInterval, vec({0.5})) == doctest::Approx(1.386294).epsilon(1e-6));
  CHECK(log_barrier_value(kUnitBox, vec({0.5, 0.5})) == doctest::Approx(2.772589).epsilon(1e-6));
  CHECK_THROWS_AS(log_barrier_value(kInterval, vec({1.0})), NotInterior);
  CHECK_THROWS_AS(log_barrier_gradient(kInterval, vec({1.5})), NotInterior);
  CHECK_THROWS_AS(log_barrier_hessian(kInterval, vec({0.0})), NotInterior);
}

TEST_CASE("log-barrier gradient and Hessian") {
  CHECK(log_barrier_gradient(kInterval, vec({0.25}))[0] == doctest::Approx(-8.0 / 3.0).epsilon(1e-14));
  CHECK(log_barrier_gradient(kUnitBox, vec({0.5, 0.5})).norm() < 1e-14);
  CHECK((log_barrier_hessian(kUnitBox, vec({0.5, 0.5})) - 8.0 * Matrix::Identity(2, 2)).norm() < 1e-13);
  const Polytope sym = build_box(3, -2, 2);
  CHECK(log_barrier_gradient(sym, Vector::Zero(3)).norm() < 1e-15);
}

TEST_CASE("log-barrier parameters are (1, m)") {
  CHECK(barrier_params_log(kUnitBox).M == 1.0);
  CHECK(barrier_params_log(kUnitBox).nu == 4.0);
  CHECK(barrier_params_log(kInterval).nu == 2.0);
  CHECK(barrier_params_log(build_reduced_simplex(3)).nu == 3.0);
}

TEST_CASE("hybrid barrier") {
  const BarrierPtr hyb = hybrid_compose(make_log_barrier(kInterval), 2.0, 1.0);
  CHECK(hyb->value(vec({0.5})) == doctest::Approx(1.636294).epsilon(1e-6));
  CHECK(hyb->params().nu == 2.0);
  CHECK(hyb->params().M == 1.0);

  const BarrierPtr centered = hybrid_compose(make_log_barrier(build_box(2, -1, 1)), 4.0, 1.0);
  CHECK(centered->gradient(Vector::Zero(2)).norm() < 1e-15);

  const BarrierPtr box = hybrid_compose(make_log_barrier(kUnitBox), 4.0, 1.0);
  CHECK((box->hessian(vec({0.5, 0.5})) - 12.0 * Matrix::Identity(2, 2)).norm() < 1e-13);
  CHECK_THROWS_AS(hybrid_compose(make_log_barrier(kUnitBox), 0.0, 1.0), Error);
}

TEST_CASE("oracle with noise off is exact") {
  Oracle oracle(make_log_barrier(kInterval), {0.01, 0.001, NoiseMode::Off, 3});
  CHECK(oracle.gradient(vec({0.25}))[0] == doctest::Approx(-8.0 / 3.0).epsilon(1e-14));
  const HessianApprox h = oracle.hessian(vec({0.5}));
  CHECK(h.h(0, 0) == doctest::Approx(8.0));
}

TEST_CASE("adversarial gradient noise sits on the tolerance boundary") {
  const BarrierPtr phi = make_log_barrier(kInterval);
  Oracle zero(phi, {0.0, 0.0, NoiseMode::Adversarial, 1});
  CHECK(zero.gradient(vec({0.25}))[0] == doctest::Approx(-8.0 / 3.0).epsilon(1e-14));
  Oracle noisy(phi, {0.01, 0.0, NoiseMode::Adversarial, 1});
  for (int k = 0; k < 10; ++k) CHECK(std::abs(noisy.gradient(vec({0.5}))[0]) == doctest::Approx(0.028284).epsilon(1e-5));

  const BarrierPtr box = make_log_barrier(build_box(3, -1, 2));
  Oracle noisy3(box, {0.02, 0.0, NoiseMode::Adversarial, 9});
  const Vector w = vec({0.1, 1.2, -0.4});
  const SpdFactor f = spd_factorize(box->hessian(w));
  for (int k = 0; k < 10; ++k) {
    CHECK(dual_quad_norm(noisy3.gradient(w) - box->gradient(w), f) == doctest::Approx(0.02).epsilon(1e-12));
  }
}

TEST_CASE("adversarial Hessian noise is a (1 +/- alpha) scaling") {
  const BarrierPtr box = make_log_barrier(kUnitBox);
  const Vector c = vec({0.5, 0.5});
  Oracle exact(box, {0.0, 0.0, NoiseMode::Adversarial, 1});
  CHECK((exact.hessian(c).h - 8.0 * Matrix::Identity(2, 2)).norm() < 1e-13);
  Oracle noisy(box, {0.0, 0.001, NoiseMode::Adversarial, 1});
  for (int k = 0; k < 10; ++k) {
    const HessianApprox h = noisy.hessian(c);
    CHECK(std::abs(h.h(0, 0) / 8.0 - 1.0) == doctest::Approx(0.001).epsilon(1e-9));
    CHECK(spectral_sandwich_check(h.h, box->hessian(c), 0.001));
    CHECK((h.factor.reconstruct() - h.h).norm() < 1e-12);
  }
}

TEST_CASE("oracle calls are counted") {
  const BarrierPtr phi = make_log_barrier(kUnitBox);
  Oracle oracle(phi, {});
  const Vector c = vec({0.5, 0.5});
  oracle.gradient(c);
  oracle.gradient(c);
  oracle.hessian(c);
  phi->hessian(c);  // direct evaluations are not oracle calls
  CHECK(phi->counters().gradient_calls == 2);
  CHECK(phi->counters().hessian_calls == 1);
}
