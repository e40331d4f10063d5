#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "condlp/conic.hpp"
#include "condlp/lp.hpp"
#include "oracles.hpp"

using namespace condlp;

static Matrix mat(Index r, Index c, std::initializer_list<double> v) {
  Matrix m(r, c);
  Index k = 0;
  for (double x : v) {
    m(k / c, k % c) = x;
    ++k;
  }
  return m;
}
static Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Index>(v.size()));
  Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

// Direct LP on the original (unhomogenized) primal.
static bool primal_direct(const CanonicalInstance& in) {
  LinearProgram lp(in.d());
  if (in.form >= 2)
    for (Index j = 0; j < in.d(); ++j) lp.set_nonneg(j);
  for (Index i = 0; i < in.n(); ++i) lp.add(in.A.row(i).transpose(), in.form == 3 ? Sense::Eq : Sense::Le, in.b(i));
  return oracle::vertex_enumeration_feasible(lp);
}

// Direct LP on the dual in its conic form: A^T y <= c with y >= 0 for form 2, free y for form 3.
static bool dual_direct(const CanonicalInstance& in) {
  LinearProgram lp(in.n());
  if (in.form == 2)
    for (Index i = 0; i < in.n(); ++i) lp.set_nonneg(i);
  for (Index j = 0; j < in.d(); ++j) lp.add(in.A.col(j), Sense::Le, in.c(j));
  return oracle::vertex_enumeration_feasible(lp);
}

TEST_CASE("homogenize form 1") {
  CanonicalInstance in{1, mat(1, 1, {1}), vec({1}), vec({0})};
  const auto p = homogenize_primal(in);
  CHECK(p.M == mat(1, 2, {-1, 1}));
  REQUIRE(p.cone.is_orthant());
  CHECK(p.cone.as_orthant().strict == std::vector<Index>{1});
  CHECK(p.cone.as_orthant().nonneg.empty());
}

TEST_CASE("homogenize form 2") {
  CanonicalInstance in{2, mat(1, 2, {2, 0}), vec({3}), vec({0, 0})};
  const auto p = homogenize_primal(in);
  CHECK(p.M == mat(1, 3, {-2, 0, 3}));
  CHECK(p.cone.as_orthant().strict == std::vector<Index>{2});
  CHECK(p.cone.as_orthant().nonneg == std::vector<Index>{0, 1});
  CanonicalInstance f3{3, mat(1, 2, {2, 0}), vec({3}), vec({0, 0})};
  CHECK_THROWS_AS(homogenize_primal(f3), InvalidInput);
}

TEST_CASE("homogenize dual") {
  CanonicalInstance in{3, mat(2, 1, {1, 0}), vec({0, 0}), vec({1})};
  const auto p = homogenize_dual(in);
  CHECK(p.M == mat(1, 3, {-1, 0, 1}));
  CHECK(p.cone.as_orthant().strict == std::vector<Index>{2});
  CHECK(p.cone.as_orthant().nonneg.empty());
  in.form = 2;
  CHECK(homogenize_dual(in).cone.as_orthant().nonneg == std::vector<Index>{0, 1});
  in.form = 1;
  CHECK_THROWS_AS(homogenize_dual(in), InvalidInput);
}

TEST_CASE("dual equality form") {
  CanonicalInstance in{1, mat(1, 2, {1, 0}), vec({1}), vec({1, 0})};
  const auto e = dual_equality(in);
  CHECK(e.A == in.A);
  CHECK(e.c == in.c);
  in.form = 3;
  CHECK(dual_equality(in).A == in.A.transpose());
  CHECK(dual_equality(in).c == in.b);
  in.form = 2;
  CHECK_THROWS_AS(dual_equality(in), InvalidInput);
}

TEST_CASE("is_feasible examples") {
  ConicFeasibilityProblem p{mat(1, 2, {0, 1}), ConeDescriptor::orthant(2, {1})};
  const auto r = is_feasible(p);
  REQUIRE(r.feasible);
  CHECK(r.witness(1) > 0);
  CHECK((p.M * r.witness).minCoeff() >= -1e-12);

  ConicFeasibilityProblem q{mat(1, 2, {-1, 0}), ConeDescriptor::orthant(2, {0})};
  CHECK_FALSE(is_feasible(q).feasible);
}

TEST_CASE("orthant never contains the origin") {
  ConicFeasibilityProblem p{Matrix::Zero(1, 3), ConeDescriptor::orthant(3, {2}, {0})};
  const auto r = is_feasible(p);
  REQUIRE(r.feasible);
  CHECK(r.witness.norm() == doctest::Approx(1.0));
  CHECK(p.cone.contains(r.witness, 0.0));
}

TEST_CASE("ray cone feasibility") {
  ConicFeasibilityProblem p{mat(2, 2, {1, 0, 0, 1}), ConeDescriptor::ray(vec({1, 0}))};
  CHECK(is_feasible(p).feasible);
  p.M = mat(1, 2, {-1, 0});
  CHECK_FALSE(is_feasible(p).feasible);
  CHECK_THROWS_AS(ConeDescriptor::ray(vec({2, 0})), InvalidInput);
}

TEST_CASE("100 random 3x2 problems agree with a grid over the half circle") {
  RandomStream rng(21, 0);
  int feas = 0, checked = 0;
  for (int t = 0; t < 100; ++t) {
    const Matrix M = rng.normal_matrix(3, 2);
    ConicFeasibilityProblem p{M, ConeDescriptor::orthant(2, {1})};
    const double pi = std::acos(-1.0);
    const double grid = oracle::grid_max_circle([&](const Vector& x) { return (M * x).minCoeff(); },
                                                1e-3, pi - 1e-3, 1e-3);
    if (std::abs(grid) < 1e-3) continue;  // too close to call on the grid
    ++checked;
    const bool expect = grid > 0;
    CHECK(is_feasible(p).feasible == expect);
    if (expect) ++feas;
  }
  CHECK(checked > 90);
  CHECK(feas > 5);
}

TEST_CASE("feasibility is scale invariant") {
  RandomStream rng(22, 0);
  for (int t = 0; t < 50; ++t) {
    const Matrix M = rng.normal_matrix(3, 3);
    ConicFeasibilityProblem p{M, ConeDescriptor::orthant(3, {2}, {0})};
    const bool base = is_feasible(p).feasible;
    for (double a : {1e-6, 0.37, 1e5}) {
      p.M = a * M;
      CHECK(is_feasible(p).feasible == base);
    }
  }
}

TEST_CASE("homogenization preserves feasibility") {
  RandomStream rng(23, 0);
  for (int form : {1, 2}) {
    int feas = 0;
    for (int t = 0; t < 50; ++t) {
      const Index n = 1 + rng.below(3), d = 1 + rng.below(2);
      CanonicalInstance in{form, rng.normal_matrix(n, d), rng.normal_vector(n), rng.normal_vector(d)};
      const bool direct = primal_direct(in);
      CHECK(is_feasible(homogenize_primal(in)).feasible == direct);
      feas += direct;
    }
    CHECK(feas > 3);
  }
  for (int form : {2, 3}) {
    int feas = 0;
    for (int t = 0; t < 50; ++t) {
      const Index n = 1 + rng.below(3), d = 1 + rng.below(3);
      CanonicalInstance in{form, rng.normal_matrix(n, d), rng.normal_vector(n), rng.normal_vector(d)};
      const bool direct = dual_direct(in);
      CHECK(is_feasible(homogenize_dual(in)).feasible == direct);
      feas += direct;
    }
    CHECK(feas > 3);
  }
}

TEST_CASE("dual equality feasibility matches direct enumeration") {
  RandomStream rng(24, 0);
  int feas = 0;
  for (int t = 0; t < 50; ++t) {
    const Index n = 1 + rng.below(3), d = 1 + rng.below(2);
    DualEqualityProblem e{rng.normal_matrix(n, d), rng.normal_vector(d)};
    LinearProgram lp(n);
    for (Index i = 0; i < n; ++i) lp.set_nonneg(i);
    for (Index j = 0; j < d; ++j) lp.add(e.A.col(j), Sense::Eq, e.c(j));
    const bool expect = oracle::vertex_enumeration_feasible(lp);
    CHECK(is_feasible(e) == expect);
    feas += expect;
  }
  CHECK(feas > 3);
}

TEST_CASE("instance validation") {
  CanonicalInstance in{1, mat(1, 2, {1, 0}), vec({1, 2}), vec({1, 0})};
  CHECK_THROWS_AS(in.validate(), InvalidInput);
  in.b = vec({NAN});
  CHECK_THROWS_AS(in.validate(), InvalidInput);
  CanonicalInstance f4{4, mat(1, 2, {1, 0}), Vector(), Vector()};
  CHECK_NOTHROW(f4.validate());
  CHECK_THROWS_AS(ConeDescriptor::orthant(2, {0}, {0}), InvalidInput);
  CHECK_THROWS_AS(ConeDescriptor::orthant(2, {}), InvalidInput);
}
