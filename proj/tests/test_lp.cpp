#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "condlp/errors.hpp"
#include "condlp/lp.hpp"
#include "oracles.hpp"

using namespace condlp;

static Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Index>(v.size()));
  Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

TEST_CASE("x >= 1 and x <= 0 is infeasible") {
  LinearProgram lp(1);
  lp.add(vec({1}), Sense::Ge, 1.0);
  lp.add(vec({1}), Sense::Le, 0.0);
  CHECK_FALSE(lp_feasible(lp).feasible);
}

TEST_CASE("simplex segment is feasible with witness on the segment") {
  LinearProgram lp(2);
  lp.set_nonneg(0);
  lp.set_nonneg(1);
  lp.add(vec({1, 1}), Sense::Eq, 1.0);
  const auto f = lp_feasible(lp);
  REQUIRE(f.feasible);
  CHECK(f.witness.sum() == doctest::Approx(1.0));
  CHECK(f.witness.minCoeff() >= -1e-9);
}

TEST_CASE("optimal values on small programs") {
  // max x + y s.t. x + 2y <= 4, 3x + y <= 6, x, y >= 0 -> (1.6, 1.2), value 2.8
  LinearProgram lp(2);
  lp.set_nonneg(0);
  lp.set_nonneg(1);
  lp.add(vec({1, 2}), Sense::Le, 4);
  lp.add(vec({3, 1}), Sense::Le, 6);
  lp.objective = vec({1, 1});
  const auto s = solve_lp(lp);
  REQUIRE(s.status == LpStatus::Optimal);
  CHECK(s.objective == doctest::Approx(2.8));
  CHECK(s.x(0) == doctest::Approx(1.6));

  LinearProgram u(1);
  u.objective = vec({1});
  u.add(vec({1}), Sense::Ge, 0);
  CHECK(solve_lp(u).status == LpStatus::Unbounded);

  // free variable driven negative
  LinearProgram fr(1);
  fr.objective = vec({-1});
  fr.add(vec({1}), Sense::Ge, -3);
  const auto sf = solve_lp(fr);
  REQUIRE(sf.status == LpStatus::Optimal);
  CHECK(sf.x(0) == doctest::Approx(-3));
}

TEST_CASE("degenerate programs terminate") {
  // classic cycling example for the textbook rule
  LinearProgram lp(4);
  for (int j = 0; j < 4; ++j) lp.set_nonneg(j);
  lp.add(vec({0.5, -5.5, -2.5, 9}), Sense::Le, 0);
  lp.add(vec({0.5, -1.5, -0.5, 1}), Sense::Le, 0);
  lp.add(vec({1, 0, 0, 0}), Sense::Le, 1);
  lp.objective = vec({10, -57, -9, -24});
  const auto s = solve_lp(lp);
  REQUIRE(s.status == LpStatus::Optimal);
  CHECK(s.objective == doctest::Approx(1.0));
}

TEST_CASE("iteration cap raises") {
  LinearProgram lp(2);
  lp.set_nonneg(0);
  lp.set_nonneg(1);
  lp.add(vec({1, 2}), Sense::Le, 4);
  lp.add(vec({3, 1}), Sense::Le, 6);
  lp.objective = vec({1, 1});
  Tolerances t;
  t.max_iters = 1;
  CHECK_THROWS_AS(solve_lp(lp, t), SolverNonconvergence);
}

TEST_CASE("200 random systems agree with vertex enumeration") {
  RandomStream rng(11, 0);
  int feasible = 0;
  for (int t = 0; t < 200; ++t) {
    const Index n = 1 + rng.below(3);
    const Index m = 1 + rng.below(4);
    LinearProgram lp(n);
    for (Index j = 0; j < n; ++j) lp.set_nonneg(j, rng.uniform() < 0.5);
    for (Index i = 0; i < m; ++i) {
      const double u = rng.uniform();
      const Sense s = u < 0.45 ? Sense::Le : u < 0.9 ? Sense::Ge : Sense::Eq;
      lp.add(rng.normal_vector(n), s, rng.normal());
    }
    const bool expect = oracle::vertex_enumeration_feasible(lp);
    const auto got = lp_feasible(lp);
    CHECK(got.feasible == expect);
    if (got.feasible) {
      ++feasible;
      for (size_t i = 0; i < lp.rows.size(); ++i) {
        const double v = lp.rows[i].dot(got.witness) - lp.rhs[i];
        const double sc = std::max(1.0, lp.rows[i].cwiseAbs().maxCoeff());
        if (lp.senses[i] == Sense::Le) CHECK(v <= 1e-9 * sc);
        if (lp.senses[i] == Sense::Ge) CHECK(v >= -1e-9 * sc);
        if (lp.senses[i] == Sense::Eq) CHECK(std::abs(v) <= 1e-9 * sc);
      }
    }
  }
  // both outcomes must be exercised
  CHECK(feasible > 20);
  CHECK(feasible < 180);
}
