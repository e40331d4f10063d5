#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>

#include "condlp/errors.hpp"

namespace condlp {

using Index = Eigen::Index;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

double log2(double x);
double ln(double x);

double frobenius_norm(const Matrix& m);
double frobenius_norm(const Vector& v);

// Frobenius norm of a horizontal/vertical concatenation: sqrt of the sum of squared norms.
template <typename First, typename... Rest>
double frobenius_norm(const First& first, const Rest&... rest) {
  double s = first.squaredNorm();
  ((s += rest.squaredNorm()), ...);
  return std::sqrt(s);
}

double max_abs_entry(const Matrix& m);

void require_finite(const Matrix& m, const std::string& what);
void require_finite(const Vector& v, const std::string& what);

// Deterministic stream keyed by (master_seed, stream_index). The bit pattern of
// every draw is fixed by the standard definition of mt19937_64 plus the explicit
// conversions below, so results do not depend on the standard library vendor.
class RandomStream {
 public:
  RandomStream(std::uint64_t master_seed, std::uint64_t stream_index);

  std::uint64_t next_u64();
  double uniform();      // in [0, 1)
  double uniform_open(); // in (0, 1)
  double normal();       // standard normal, Marsaglia polar method
  Index below(Index n);  // uniform integer in [0, n)

  Vector normal_vector(Index n);
  Matrix normal_matrix(Index rows, Index cols);
  Vector unit_vector(Index n);

  std::uint64_t master_seed() const { return master_; }
  std::uint64_t stream_index() const { return index_; }

 private:
  std::uint64_t master_;
  std::uint64_t index_;
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

std::uint64_t splitmix64(std::uint64_t x);

struct GaussianSpec {
  Matrix center;
  double sigma = 1.0;
};

Matrix sample_gaussian(const GaussianSpec& spec, RandomStream& rng);
Vector sample_gaussian(const Vector& center, double sigma, RandomStream& rng);

// Upper bound on Pr[||x - center||^2 >= kappa^2] for x ~ N(center, sigma^2 I_d).
double chi2_tail_bound(Index d, double sigma, double kappa);

// Radius r such that Pr[||x - center|| >= r] <= eps (needs d >= 2, eps <= e^-2).
double norm_tail_threshold(Index d, double sigma, double eps);

// Upper bound on Pr[||x|| <= eps] for x ~ N(center, sigma^2 I_d).
double small_ball_bound(Index d, double sigma, double eps);

double standard_normal_cdf(double x);

// Two-sided normal-approximation half width at z standard errors.
double binomial_halfwidth(double p_hat, Index trials, double z);

}  // namespace condlp
