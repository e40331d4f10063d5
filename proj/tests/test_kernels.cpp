#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "condlp/kernels.hpp"
#include "oracles.hpp"

using namespace condlp;

static Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Index>(v.size()));
  Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}
static Matrix rows(std::initializer_list<Vector> rs) {
  Matrix m(static_cast<Index>(rs.size()), rs.begin()->size());
  Index i = 0;
  for (const Vector& r : rs) m.row(i++) = r.transpose();
  return m;
}
static const double kPi = std::acos(-1.0);

TEST_CASE("nnls against closed forms") {
  // min ||w - f|| over w >= 0 is the positive part
  const Vector w = nnls(Matrix::Identity(3, 3), vec({1, -2, 3}));
  CHECK((w - vec({1, 0, 3})).norm() < 1e-12);
  // optimality conditions on random data
  RandomStream rng(41, 0);
  for (int t = 0; t < 50; ++t) {
    const Matrix E = rng.normal_matrix(5, 4);
    const Vector f = rng.normal_vector(5);
    const Vector x = nnls(E, f);
    const Vector g = E.transpose() * (f - E * x);
    for (Index j = 0; j < 4; ++j) {
      CHECK(x(j) >= 0.0);
      CHECK(g(j) <= 1e-9);
      if (x(j) > 1e-9) CHECK(std::abs(g(j)) <= 1e-9);
    }
  }
}

TEST_CASE("maxmin examples") {
  const auto cone = ConeDescriptor::orthant(2, {1});
  auto r = maxmin_direction(rows({vec({0, 1})}), cone);
  CHECK(r.value == doctest::Approx(1.0).epsilon(1e-9));
  CHECK((r.witness - vec({0, 1})).norm() < 1e-6);

  const double s = 1.0 / std::sqrt(2.0);
  const Matrix M = rows({vec({s, s}), vec({-s, s})});
  r = maxmin_direction(M, cone);
  const double grid = oracle::grid_max_circle([&](const Vector& p) { return (M * p).minCoeff(); }, 0, kPi, 1e-4);
  CHECK(grid == doctest::Approx(0.70711).epsilon(1e-4));
  CHECK(r.value == doctest::Approx(grid).epsilon(1e-5));
  CHECK(r.value <= grid + 1e-4);
  CHECK(std::abs(r.witness.norm() - 1.0) < 1e-9);

  r = maxmin_direction(rows({vec({-1, 0})}), ConeDescriptor::orthant(2, {0}));
  CHECK(r.value <= 0.0);
}

TEST_CASE("maxmin agrees with grids on random planar and spatial problems") {
  RandomStream rng(42, 0);
  for (int t = 0; t < 60; ++t) {
    const Index m = 1 + rng.below(4);
    const Matrix M = rng.normal_matrix(m, 2);
    const auto cone = ConeDescriptor::orthant(2, {1});
    const auto r = maxmin_direction(M, cone);
    const double grid = oracle::grid_max_circle([&](const Vector& p) { return (M * p).minCoeff(); }, 0, kPi, 1e-5);
    // the ball maximum is max(grid, 0) when the sphere maximum is negative
    CHECK(r.value <= std::max(grid, 0.0) + 1e-4);
    CHECK(r.value == doctest::Approx((M * r.witness).minCoeff()));
    CHECK(std::abs(r.witness.norm() - 1.0) < 1e-9);
    CHECK(r.witness(1) >= 0.0);
    if (grid > 1e-3) {
      CHECK(r.value >= grid - 1e-4);
      CHECK(r.upper >= grid - 1e-9);
      CHECK(r.upper - r.value <= 1e-6);
    }
  }
  for (int t = 0; t < 30; ++t) {
    const Index m = 1 + rng.below(4);
    const Matrix M = rng.normal_matrix(m, 3);
    const auto cone = ConeDescriptor::orthant(3, {2}, {0});
    const auto r = maxmin_direction(M, cone);
    const double grid = oracle::grid_max_sphere3([&](const Vector& p) { return (M * p).minCoeff(); },
                                                 [](const Vector& p) { return p(2) >= 0 && p(0) >= 0; }, 600);
    CHECK(r.value <= std::max(grid, 0.0) + 1e-2);
    if (grid > 1e-2) CHECK(r.value >= grid - 1e-6);
  }
}

TEST_CASE("maxmin is positively homogeneous") {
  RandomStream rng(43, 0);
  for (int t = 0; t < 30; ++t) {
    const Matrix M = rng.normal_matrix(3, 3);
    const auto cone = ConeDescriptor::orthant(3, {2});
    const auto r = maxmin_direction(M, cone);
    for (double a : {1e-3, 7.5}) {
      const auto s = maxmin_direction(a * M, cone);
      if (r.value > 1e-6) CHECK(s.value == doctest::Approx(a * r.value).epsilon(1e-6));
    }
  }
}

TEST_CASE("max_linear_over_cone examples") {
  const auto cone = ConeDescriptor::orthant(2, {1});
  auto r = max_linear_over_cone(vec({0, -1}), Matrix(0, 2), cone);
  CHECK(r.value_lower <= 1e-12);
  CHECK(r.value_upper >= -1e-12);
  CHECK(r.value_upper <= 1e-9);

  r = max_linear_over_cone(vec({1, 1}), Matrix(0, 2), cone);
  CHECK(r.value_lower <= std::sqrt(2.0) + 1e-12);
  CHECK(r.value_upper >= std::sqrt(2.0) - 1e-12);
  CHECK(r.value_upper - r.value_lower < 1e-4);
  CHECK(r.value_lower == doctest::Approx(std::sqrt(2.0)));

  r = max_linear_over_cone(vec({-1, 0}), rows({vec({1, 0})}), cone);
  CHECK(r.value_lower <= 1e-12);
  CHECK(r.value_upper >= -1e-12);
  CHECK(r.value_upper <= 1e-9);
}

TEST_CASE("max_linear_over_cone brackets a grid") {
  RandomStream rng(44, 0);
  for (int t = 0; t < 100; ++t) {
    const Vector a = rng.normal_vector(2);
    const Index ne = rng.below(3);
    const Matrix ex = rng.normal_matrix(ne, 2);
    const auto cone = ConeDescriptor::orthant(2, {1});
    auto keep = [&](const Vector& p) { return ne == 0 || (ex * p).minCoeff() >= 0; };
    // region on the grid; skip instances whose region is a single degenerate line
    double best = -1e300;
    int count = 0;
    for (double th = 0; th <= kPi + 1e-15; th += 1e-5) {
      Vector p = vec({std::cos(th), std::sin(th)});
      if (!keep(p)) continue;
      ++count;
      best = std::max(best, a.dot(p));
    }
    if (count < 10) continue;
    const auto r = max_linear_over_cone(a, ex, cone);
    CHECK(r.value_lower <= best + 1e-4);
    CHECK(r.value_upper >= best - 1e-9);
    CHECK(r.value_upper - r.value_lower <= 1e-6);
    CHECK(std::abs(r.witness.norm() - 1.0) < 1e-9);
  }
}

TEST_CASE("Frank-Wolfe examples") {
  const std::vector<Vector> pts{vec({0, 1}), vec({0, -1})};
  auto r = frank_wolfe_distance(vec({1, 0}), vec({1, 0}), pts);
  CHECK(r.distance_upper <= 1e-9);
  r = frank_wolfe_distance(vec({-0.5, 0}), vec({1, 0}), pts);
  CHECK(r.distance_upper == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(r.distance_lower == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(r.distance_lower <= r.distance_upper);
  r = frank_wolfe_distance(-pts[0], vec({1, 0}), pts);
  CHECK(r.distance_upper <= 1e-9);
}

TEST_CASE("Frank-Wolfe witnesses reconstruct and bounds tighten with iterations") {
  RandomStream rng(45, 0);
  for (int t = 0; t < 50; ++t) {
    const Index d = 2 + rng.below(3), n = 1 + rng.below(6);
    std::vector<Vector> pts;
    for (Index i = 0; i < n; ++i) pts.push_back(rng.normal_vector(d));
    const Vector c = rng.normal_vector(d);
    const Vector z = 2.0 * rng.normal_vector(d);
    Tolerances few;
    few.max_iters = 5;
    const auto a = frank_wolfe_distance(z, c, pts, few);
    const auto b = frank_wolfe_distance(z, c, pts);
    CHECK(a.distance_lower <= a.distance_upper);
    CHECK(b.distance_lower <= b.distance_upper);
    CHECK(b.distance_upper <= a.distance_upper + 1e-12);
    CHECK(b.distance_lower >= a.distance_lower - 1e-12);
    CHECK(b.gamma.minCoeff() >= 0.0);
    CHECK(b.gamma.sum() == doctest::Approx(1.0));
    CHECK(b.lambda >= 0.0);
    Vector recon = b.lambda * c;
    for (Index i = 0; i < n; ++i) recon -= b.gamma(i) * pts[static_cast<size_t>(i)];
    CHECK(std::abs((z - recon).norm() - b.distance_upper) <= 1e-9);
    CHECK(b.converged);
    CHECK(b.gap <= 1e-8);
  }
}
