#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "condlp/numerics.hpp"

using namespace condlp;

TEST_CASE("frobenius norm examples") {
  CHECK(frobenius_norm(Matrix(Matrix::Identity(2, 2))) == doctest::Approx(std::sqrt(2.0)));
  CHECK(frobenius_norm(Matrix(Matrix::Zero(3, 2))) == 0.0);
  Matrix m(1, 2);
  m << 3, 4;
  CHECK(frobenius_norm(m) == doctest::Approx(5.0));
  Vector b(1), c(2);
  b << 12;
  c << 0, 0;
  CHECK(frobenius_norm(m, b, c) == doctest::Approx(13.0));
}

TEST_CASE("frobenius norm is absolutely homogeneous") {
  RandomStream rng(1, 0);
  for (int t = 0; t < 100; ++t) {
    const Matrix m = rng.normal_matrix(3, 4);
    const double a = 10.0 * rng.normal();
    CHECK(std::abs(frobenius_norm(Matrix(a * m)) - std::abs(a) * frobenius_norm(m)) <=
          1e-12 * std::abs(a) * frobenius_norm(m));
  }
}

TEST_CASE("Frobenius and max-entry norms bracket each other") {
  RandomStream rng(2, 0);
  for (int t = 0; t < 1000; ++t) {
    const Index n = 1 + rng.below(6), d = 1 + rng.below(6);
    const Matrix a = rng.normal_matrix(n, d);
    const double f = frobenius_norm(a);
    const double mx = max_abs_entry(a);
    CHECK(f / std::sqrt(static_cast<double>(n * d)) <= mx * (1 + 1e-15));
    CHECK(mx <= f * (1 + 1e-15));
  }
}

TEST_CASE("random streams are reproducible and distinct") {
  RandomStream a(42, 7), b(42, 7), c(42, 8), e(43, 7);
  bool differ_index = false, differ_seed = false;
  for (int i = 0; i < 1000; ++i) {
    const double x = a.normal();
    CHECK(x == b.normal());
    if (x != c.normal()) differ_index = true;
    if (x != e.normal()) differ_seed = true;
  }
  CHECK(differ_index);
  CHECK(differ_seed);
}

TEST_CASE("first draws are frozen") {
  // frozen from a reference run; guards the documented transform chain
  RandomStream r(0, 0);
  CHECK(r.next_u64() == 420042965745491204ULL);
  RandomStream s(12345, 3);
  CHECK(s.normal() == -2.1298083835685322);
  CHECK(s.normal() == 1.1496301219319878);
}

TEST_CASE("sample_gaussian with zero sigma returns the center") {
  RandomStream rng(3, 0);
  Matrix c(1, 2);
  c << 1, 2;
  CHECK(sample_gaussian(GaussianSpec{c, 0.0}, rng) == c);
  CHECK_THROWS_AS(sample_gaussian(GaussianSpec{c, -1.0}, rng), InvalidInput);
}

TEST_CASE("sample mean and variance") {
  RandomStream rng(4, 0);
  const int N = 100000;
  double s = 0, s2 = 0;
  for (int i = 0; i < N; ++i) {
    const double x = sample_gaussian(Vector::Zero(1), 1.0, rng)(0);
    s += x;
  }
  CHECK(std::abs(s / N) < 0.02);
  RandomStream rng2(4, 1);
  s = 0;
  for (int i = 0; i < N; ++i) {
    const double x = sample_gaussian(Vector::Zero(1), 2.0, rng2)(0);
    s += x;
    s2 += x * x;
  }
  const double var = s2 / N - (s / N) * (s / N);
  CHECK(std::abs(var - 4.0) < 0.05 * 4.0);
}

TEST_CASE("chi-squared tail bound") {
  CHECK(chi2_tail_bound(2, 1.0, std::sqrt(2.0)) == doctest::Approx(1.0));
  CHECK(chi2_tail_bound(2, 1.0, 2.0) == doctest::Approx(2.0 / std::exp(1.0)).epsilon(1e-12));
  CHECK(chi2_tail_bound(2, 1.0, 3.0) < chi2_tail_bound(2, 1.0, 2.0));
  CHECK_THROWS_AS(chi2_tail_bound(2, 1.0, 1.0), InvalidInput);
}

TEST_CASE("norm tail threshold") {
  CHECK(norm_tail_threshold(4, 1.0, std::exp(-2.0)) == doctest::Approx(2.0 * std::sqrt(5.0)));
  CHECK(norm_tail_threshold(4, 2.0, 0.01) == doctest::Approx(2.0 * norm_tail_threshold(4, 1.0, 0.01)));
  CHECK_THROWS_AS(norm_tail_threshold(4, 1.0, 0.2), InvalidInput);
  CHECK_THROWS_AS(norm_tail_threshold(1, 1.0, 0.01), InvalidInput);
}

TEST_CASE("small ball bound") {
  CHECK(small_ball_bound(3, 0.5, 0.5) == doctest::Approx(1.0));
  CHECK(small_ball_bound(3, 0.5, 0.0) == 0.0);
  CHECK(small_ball_bound(2, 1.0, 0.1) == doctest::Approx(0.01));
}

// The tail bounds must dominate sampled frequencies (binomial 3 sigma slack).
TEST_CASE("tail bounds dominate Monte Carlo frequencies") {
  const int N = 100000;
  struct Pt {
    Index d;
    double sigma, kappa;
  };
  for (Pt pt : {Pt{2, 1.0, 2.0}, Pt{3, 1.0, 2.5}, Pt{5, 0.5, 1.8}, Pt{4, 2.0, 6.0}}) {
    RandomStream rng(5, static_cast<std::uint64_t>(pt.d));
    int hits = 0;
    for (int i = 0; i < N; ++i)
      if (rng.normal_vector(pt.d).squaredNorm() * pt.sigma * pt.sigma >= pt.kappa * pt.kappa) ++hits;
    const double freq = static_cast<double>(hits) / N;
    CHECK(freq - binomial_halfwidth(freq, N, 3.0) <= chi2_tail_bound(pt.d, pt.sigma, pt.kappa));
  }
  {
    RandomStream rng(6, 0);
    const double thr = norm_tail_threshold(3, 1.0, 0.01);
    int hits = 0;
    for (int i = 0; i < N; ++i)
      if (rng.normal_vector(3).norm() >= thr) ++hits;
    const double freq = static_cast<double>(hits) / N;
    CHECK(freq - binomial_halfwidth(freq, N, 3.0) <= 0.01);
  }
  {
    RandomStream rng(7, 0);
    const int M = 1000000;
    int hits = 0;
    for (int i = 0; i < M; ++i)
      if (rng.normal_vector(2).norm() <= 0.1) ++hits;
    const double freq = static_cast<double>(hits) / M;
    CHECK(freq <= small_ball_bound(2, 1.0, 0.1));
  }
}

TEST_CASE("logs are named by base") {
  CHECK(condlp::log2(8.0) == doctest::Approx(3.0));
  CHECK(condlp::ln(std::exp(2.0)) == doctest::Approx(2.0));
}
