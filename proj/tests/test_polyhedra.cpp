#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "condlp/kernels.hpp"
#include "condlp/polyhedra.hpp"

using namespace condlp;

static Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Index>(v.size()));
  Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

// true iff the facet list contains the normalized inequality b.w <= d
static bool has_facet(const HRep& h, const Vector& b, double d) {
  const double n = b.norm();
  for (Index j = 0; j < h.B.rows(); ++j)
    if ((h.B.row(j).transpose() - b / n).norm() < 1e-9 && std::abs(h.d(j) - d / n) < 1e-9) return true;
  return false;
}

static bool inside(const HRep& h, const Vector& z, double tol) {
  return h.B.rows() == 0 || ((h.B * z) - h.d).maxCoeff() <= tol;
}

TEST_CASE("strip facets") {
  const HRep h = facet_enumeration(vec({1, 0}), {vec({0, 1}), vec({0, -1})});
  CHECK(h.B.rows() == 3);
  CHECK(has_facet(h, vec({-1, 0}), 0));
  CHECK(has_facet(h, vec({0, 1}), 1));
  CHECK(has_facet(h, vec({0, -1}), 1));
}

TEST_CASE("single point gives the ray") {
  const HRep h = facet_enumeration(vec({1, 0}), {vec({0, 0})});
  CHECK(has_facet(h, vec({-1, 0}), 0));
  CHECK(has_facet(h, vec({0, 1}), 0));
  CHECK(has_facet(h, vec({0, -1}), 0));
  CHECK(inside(h, vec({3, 0}), 1e-12));
  CHECK_FALSE(inside(h, vec({3, 0.1}), 1e-12));
}

TEST_CASE("inside distance examples") {
  const HRep h = facet_enumeration(vec({1, 0}), {vec({0, 1}), vec({0, -1})});
  CHECK(inside_distance(vec({1, 0}), h) == doctest::Approx(1.0));
  CHECK(inside_distance(vec({0.5, 0.8}), h) == doctest::Approx(0.2));
  CHECK(inside_distance(vec({0.0, 0.3}), h) == doctest::Approx(0.0));
  CHECK(inside_distance(vec({2.0, 0.0}), h) == doctest::Approx(1.0));
  CHECK_THROWS_AS(inside_distance(vec({-1, 0}), h), InvalidInput);
}

TEST_CASE("dimension cap") {
  CHECK_THROWS_AS(facet_enumeration(Vector::Ones(5), {Vector::Zero(5)}), DimensionTooLarge);
  CHECK_NOTHROW(facet_enumeration(Vector::Ones(4), {Vector::Zero(4), Vector::Unit(4, 0)}));
}

TEST_CASE("generators satisfy every facet") {
  RandomStream rng(31, 0);
  for (int t = 0; t < 100; ++t) {
    const Index d = 2 + rng.below(3);
    const Index n = 1 + rng.below(6);
    const Vector c = rng.normal_vector(d);
    std::vector<Vector> pts;
    for (Index i = 0; i < n; ++i) pts.push_back(rng.normal_vector(d));
    const HRep h = facet_enumeration(c, pts);
    REQUIRE(h.B.rows() > 0);
    for (const Vector& x : pts) CHECK(inside(h, -x, 1e-9));
    for (const Vector& x : pts) CHECK(inside(h, 5.0 * c - x, 1e-9));
  }
}

TEST_CASE("facet membership agrees with Frank-Wolfe on random planar sets") {
  RandomStream rng(32, 0);
  int in = 0, out = 0;
  for (int t = 0; t < 100; ++t) {
    const Index n = 1 + rng.below(5);
    const Vector c = rng.normal_vector(2);
    std::vector<Vector> pts;
    for (Index i = 0; i < n; ++i) pts.push_back(rng.normal_vector(2));
    const HRep h = facet_enumeration(c, pts);
    for (int s = 0; s < 5; ++s) {
      const Vector z = 2.0 * rng.normal_vector(2);
      const auto fw = frank_wolfe_distance(z, c, pts);
      const double viol = h.B.rows() ? ((h.B * z) - h.d).maxCoeff() : -1.0;
      if (std::abs(viol) < 1e-6) continue;
      if (viol < 0) {
        CHECK(fw.distance_upper <= 1e-6);
        // the facet slack is the distance to the boundary, not to the set
        ++in;
      } else {
        CHECK(fw.distance_lower > 0.0);
        // for an outside point the largest violation never exceeds the distance
        CHECK(viol <= fw.distance_upper + 1e-9);
        ++out;
      }
    }
  }
  CHECK(in > 20);
  CHECK(out > 20);
}

TEST_CASE("cone generators of simple cones") {
  // nonnegative quadrant in R^2: two rays, no lineality
  Matrix G = Matrix::Identity(2, 2);
  auto g = cone_generators(G);
  CHECK(g.rays.size() == 2);
  CHECK(g.lineality.empty());
  // half plane x >= 0 in R^2: one ray plus a line
  Matrix H(1, 2);
  H << 1, 0;
  g = cone_generators(H);
  CHECK(g.rays.size() == 1);
  CHECK(g.lineality.size() == 1);
  // pyramid over a square in R^3: four extreme rays
  Matrix P(4, 3);
  P << 1, 0, 1, -1, 0, 1, 0, 1, 1, 0, -1, 1;
  g = cone_generators(P);
  CHECK(g.rays.size() == 4);
  for (const Vector& r : g.rays) CHECK((P * r).minCoeff() >= -1e-12);
  // x >= 0 and -x >= 0 leaves only the origin in R^1
  Matrix Z(2, 1);
  Z << 1, -1;
  g = cone_generators(Z);
  CHECK(g.rays.empty());
  CHECK(g.lineality.empty());
}
