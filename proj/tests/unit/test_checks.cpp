#include <stdexcept>

#include "barons/checks.hpp"
#include "doctest.h"

using namespace barons;

TEST_CASE("every suite passes a short run") {
  for (const auto& suite : check_suites()) {
    const CheckReport rep = run_check(suite, 17, 25);
    CHECK_MESSAGE(rep.ok(), suite << ": " << rep.first_counterexample);
    CHECK(rep.worst_gap <= 0.0);
    for (const auto& c : rep.counts) CHECK(c.passed == 25);
  }
}

TEST_CASE("unknown suites and bad trial counts") {
  CHECK_FALSE(is_check_suite("nosuchsuite"));
  CHECK_THROWS_AS(run_check("nosuchsuite", 1, 10), std::invalid_argument);
  CHECK_THROWS_AS(run_check("hessian-stability", 1, 0), std::invalid_argument);
}

TEST_CASE("random polytopes contain their witness and are bounded") {
  std::mt19937_64 rng(5);
  for (int k = 0; k < 50; ++k) {
    const int d = 1 + k % 5;
    const Polytope p = random_polytope(rng, d, 2 * d + k % 3);
    CHECK(is_strictly_feasible(p, p.witness()));
    for (int j = 0; j < 5; ++j) {
      const Vector y = random_interior_point(rng, p);
      CHECK(is_strictly_feasible(p, y));
    }
  }
}

TEST_CASE("reports are reproducible") {
  const CheckReport a = run_check("newton-decrement-decrease", 3, 20);
  const CheckReport b = run_check("newton-decrement-decrease", 3, 20);
  CHECK(a.worst_gap == b.worst_gap);
}
