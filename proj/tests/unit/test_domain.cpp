#include <sstream>

#include "barons/domain.hpp"
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
}  // namespace

TEST_CASE("rows are normalized to unit norm") {
  Matrix a(4, 2);
  a << 2, 0, 0, 2, -2, 0, 0, -2;
  const Polytope p(a, vec({0, 0, -2, -2}), vec({0.5, 0.5}));
  for (Eigen::Index i = 0; i < 4; ++i) CHECK(p.normals().row(i).norm() == doctest::Approx(1.0));
  CHECK((p.offsets() - vec({0, 0, -1, -1})).norm() < 1e-15);

  Matrix a1(2, 1);
  a1 << 1, -1;
  const Polytope interval(a1, vec({0, -1}), vec({0.5}));
  CHECK((slacks(interval, vec({0.25})) - vec({0.25, 0.75})).norm() < 1e-15);
  CHECK((slacks(interval, vec({1.0})) - vec({1.0, 0.0})).norm() < 1e-15);
}

TEST_CASE("construction errors") {
  const Polytope box = build_box(2, 0, 1);
  CHECK_THROWS_AS(Polytope(box.normals(), box.offsets(), vec({1.0, 0.5})), InfeasibleWitness);
  Matrix zero = Matrix::Zero(1, 2);
  CHECK_THROWS_AS(Polytope(zero, vec({0}), vec({0, 0})), ZeroRow);
  CHECK_THROWS_AS(build_box(2, 1, 1), InvalidBounds);
  CHECK_THROWS_AS(build_reduced_simplex(1), InvalidBounds);
}

TEST_CASE("slacks and strict feasibility on the unit box") {
  const Polytope box = build_box(2, 0, 1);
  CHECK((slacks(box, vec({0.5, 0.5})) - Vector::Constant(4, 0.5)).norm() < 1e-15);
  CHECK(is_strictly_feasible(box, vec({0.5, 0.5})));
  CHECK_FALSE(is_strictly_feasible(box, vec({1.0, 0.5})));
  CHECK_FALSE(is_strictly_feasible(box, vec({0.01, 0.5}), 0.05));
  CHECK((box.witness() - vec({0.5, 0.5})).norm() == 0.0);
}

TEST_CASE("shrink_toward") {
  const Vector w = vec({1, 0});
  const Vector star = vec({1.0 / 3, 1.0 / 3});
  CHECK(shrink_toward(w, 0.0, star) == w);
  CHECK((shrink_toward(w, 1.0, star) - star).norm() < 1e-16);
  const Vector s = shrink_toward(w, 0.1, star);
  CHECK(s[0] == doctest::Approx(0.933333333333).epsilon(1e-12));
  CHECK(s[1] == doctest::Approx(0.033333333333).epsilon(1e-12));
}

TEST_CASE("reduced simplex") {
  const Polytope s3 = build_reduced_simplex(3);
  CHECK(s3.dimension() == 2);
  CHECK(s3.num_constraints() == 3);
  CHECK((s3.witness() - vec({1.0 / 3, 1.0 / 3})).norm() < 1e-16);
  CHECK(is_strictly_feasible(s3, vec({0.2, 0.7})));
  CHECK_FALSE(is_strictly_feasible(s3, vec({0.5, 0.6})));
  CHECK_FALSE(is_strictly_feasible(s3, vec({-0.01, 0.5})));

  const Polytope s2 = build_reduced_simplex(2);
  CHECK(s2.dimension() == 1);
  CHECK((slacks(s2, vec({0.25})) - vec({0.25, 0.75})).norm() < 1e-15);

  const Vector full = lift_reduced_simplex(vec({0.2, 0.3}));
  CHECK(full[2] == doctest::Approx(0.5));
}

TEST_CASE("polytope text round trip") {
  const Polytope s3 = build_reduced_simplex(4);
  std::stringstream ss;
  write_polytope(ss, s3);
  const Polytope back = read_polytope(ss);
  CHECK(back.normals() == s3.normals());
  CHECK(back.offsets() == s3.offsets());
  CHECK(back.witness() == s3.witness());

  std::istringstream bad("2 1\n1 0\n");
  CHECK_THROWS_AS(read_polytope(bad), IoError);
  CHECK_THROWS_AS(read_polytope_file("/nonexistent/domain.txt"), IoError);
}
