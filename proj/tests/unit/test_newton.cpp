#include <cmath>
#include <string>

#include "barons/errors.hpp"
#include "barons/newton.hpp"
#include "doctest.h"

using namespace barons;

namespace {
Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}
const BarrierPtr kInterval = make_log_barrier(build_box(1, 0, 1));
}  // namespace

TEST_CASE("newton decrement") {
  const ShiftedObjective plain(kInterval);
  CHECK(newton_decrement(plain, vec({0.5})) == doctest::Approx(0.0));
  CHECK(newton_decrement(plain, vec({0.25})) == doctest::Approx(2.0 / std::sqrt(10.0)).epsilon(1e-14));

  const ShiftedObjective box(make_log_barrier(build_box(2, 0, 1)), vec({1, 0}));
  CHECK(newton_decrement(box, vec({0.5, 0.5})) == doctest::Approx(0.353553).epsilon(1e-6));
}

TEST_CASE("damped newton minimization") {
  const NewtonResult center = damped_newton_minimize(ShiftedObjective(kInterval), vec({0.3}));
  CHECK(center.w[0] == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(center.decrement <= 1e-10);

  const NewtonResult shifted = damped_newton_minimize(ShiftedObjective(kInterval, vec({2.0})), vec({0.5}));
  CHECK(shifted.w[0] == doctest::Approx(1.0 - std::sqrt(2.0) / 2.0).epsilon(1e-10));

  const BarrierPtr simplex = make_log_barrier(build_reduced_simplex(3));
  const NewtonResult s3 = damped_newton_minimize(ShiftedObjective(simplex), vec({0.1, 0.2}));
  CHECK((s3.w - vec({1.0 / 3, 1.0 / 3})).norm() < 1e-9);

  CHECK_THROWS_AS(damped_newton_minimize(ShiftedObjective(kInterval), vec({1.2})), NotInterior);
}

TEST_CASE("damped newton stays interior from far away") {
  // A large shift pushes the minimizer close to the boundary.
  const ShiftedObjective obj(kInterval, vec({1e4}));
  const NewtonResult r = damped_newton_minimize(obj, vec({0.999}));
  CHECK(r.w[0] > 0.0);
  CHECK(r.w[0] < 1e-3);
  CHECK(r.decrement <= kDefaultNewtonTol);
}

TEST_CASE("max iterations carries the best iterate") {
  const ShiftedObjective obj(kInterval, vec({50.0}));
  try {
    damped_newton_minimize(obj, vec({0.9}), 1e-12, 1);
    FAIL("expected MaxIterExceeded");
  } catch (const MaxIterExceeded& e) {
    CHECK(e.best().decrement > 1e-12);
    CHECK(e.best().iterations <= 1);
    CHECK(kInterval->is_interior(e.best().w));
    CHECK(std::string(e.what()).find("damped newton") != std::string::npos);
  }
}

TEST_CASE("analytic centers") {
  CHECK((analytic_center(make_log_barrier(build_box(2, 0, 1)), vec({0.2, 0.9})) - vec({0.5, 0.5})).norm() < 1e-9);
  CHECK(analytic_center(kInterval, vec({0.8}))[0] == doctest::Approx(0.5).epsilon(1e-10));
  const Vector c = analytic_center(make_log_barrier(build_reduced_simplex(3)), vec({0.6, 0.1}));
  CHECK((c - vec({1.0 / 3, 1.0 / 3})).norm() < 1e-9);
}

TEST_CASE("approximate newton step") {
  const SpdFactor f1 = spd_factorize(Matrix::Constant(1, 1, 8.0));
  CHECK(approx_newton_step(vec({0.5}), f1, vec({0.0}))[0] == 0.5);
  CHECK(approx_newton_step(vec({0.5}), f1, vec({0.001}))[0] == doctest::Approx(0.499875).epsilon(1e-15));
  const SpdFactor f2 = spd_factorize(8.0 * Matrix::Identity(2, 2));
  const Vector w = approx_newton_step(vec({0.5, 0.5}), f2, vec({0.8, 0.0}));
  CHECK((w - vec({0.4, 0.5})).norm() < 1e-15);
  CHECK_THROWS_AS(approx_newton_step(vec({0.5}), f2, vec({0.8, 0.0})), DimensionMismatch);
}

TEST_CASE("generic self-concordant objective") {
  // f(x) = x - ln x is self-concordant with M = 1, minimized at x = 1.
  SelfConcordantObjective obj{
      [](const Vector& x) { return Vector::Constant(1, 1.0 - 1.0 / x[0]); },
      [](const Vector& x) { return Matrix::Constant(1, 1, 1.0 / (x[0] * x[0])); },
      [](const Vector& x) { return x[0] > 0.0; },
      1.0,
  };
  CHECK(damped_newton_minimize(obj, vec({40.0})).w[0] == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(damped_newton_minimize(obj, vec({1e-3})).w[0] == doctest::Approx(1.0).epsilon(1e-10));
}
