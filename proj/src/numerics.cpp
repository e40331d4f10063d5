#include "condlp/numerics.hpp"

#include <cmath>
#include <limits>

namespace condlp {

double log2(double x) { return std::log2(x); }
double ln(double x) { return std::log(x); }

double frobenius_norm(const Matrix& m) { return m.norm(); }
double frobenius_norm(const Vector& v) { return v.norm(); }

double max_abs_entry(const Matrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

void require_finite(const Matrix& m, const std::string& what) {
  if (!m.allFinite()) throw InvalidInput(what + " contains non-finite entries");
}

void require_finite(const Vector& v, const std::string& what) {
  if (!v.allFinite()) throw InvalidInput(what + " contains non-finite entries");
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

RandomStream::RandomStream(std::uint64_t master_seed, std::uint64_t stream_index)
    : master_(master_seed),
      index_(stream_index),
      engine_(splitmix64(splitmix64(master_seed) ^ splitmix64(~stream_index))) {}

std::uint64_t RandomStream::next_u64() { return engine_(); }

double RandomStream::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RandomStream::uniform_open() {
  return (static_cast<double>(next_u64() >> 12) + 0.5) * 0x1.0p-52;
}

double RandomStream::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u, v, s;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double f = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * f;
  has_spare_ = true;
  return u * f;
}

Index RandomStream::below(Index n) {
  if (n <= 0) throw InvalidInput("below: n must be positive");
  const auto un = static_cast<std::uint64_t>(n);
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % un;
  std::uint64_t x;
  do {
    x = next_u64();
  } while (x >= limit);
  return static_cast<Index>(x % un);
}

Vector RandomStream::normal_vector(Index n) {
  Vector v(n);
  for (Index i = 0; i < n; ++i) v(i) = normal();
  return v;
}

Matrix RandomStream::normal_matrix(Index rows, Index cols) {
  Matrix m(rows, cols);
  // row-major fill order so the draw sequence reads naturally
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) m(i, j) = normal();
  return m;
}

Vector RandomStream::unit_vector(Index n) {
  Vector v;
  double nv;
  do {
    v = normal_vector(n);
    nv = v.norm();
  } while (nv == 0.0);
  return v / nv;
}

Matrix sample_gaussian(const GaussianSpec& spec, RandomStream& rng) {
  if (!(spec.sigma >= 0.0) || !std::isfinite(spec.sigma))
    throw InvalidInput("sigma must be nonnegative and finite");
  if (spec.sigma == 0.0) return spec.center;
  require_finite(spec.center, "center");
  return spec.center + spec.sigma * rng.normal_matrix(spec.center.rows(), spec.center.cols());
}

Vector sample_gaussian(const Vector& center, double sigma, RandomStream& rng) {
  if (!(sigma >= 0.0) || !std::isfinite(sigma))
    throw InvalidInput("sigma must be nonnegative and finite");
  require_finite(center, "center");
  if (sigma == 0.0) return center;
  return center + sigma * rng.normal_vector(center.size());
}

double chi2_tail_bound(Index d, double sigma, double kappa) {
  if (d < 1) throw InvalidInput("chi2_tail_bound: d must be >= 1");
  if (!(sigma > 0.0)) throw InvalidInput("chi2_tail_bound: sigma must be positive");
  const double c = kappa * kappa / (static_cast<double>(d) * sigma * sigma);
  if (!(c >= 1.0))
    throw InvalidInput("chi2_tail_bound: kappa^2 / (d sigma^2) must be at least 1");
  const double dd = static_cast<double>(d);
  return std::exp(0.5 * dd * (1.0 - c + std::log(c)));
}

double norm_tail_threshold(Index d, double sigma, double eps) {
  if (d < 2) throw InvalidInput("norm_tail_threshold: d must be >= 2");
  if (!(sigma > 0.0)) throw InvalidInput("norm_tail_threshold: sigma must be positive");
  if (!(eps > 0.0) || eps > std::exp(-2.0))
    throw InvalidInput("norm_tail_threshold: eps must lie in (0, e^-2]");
  return sigma * std::sqrt(static_cast<double>(d) * (1.0 + 2.0 * std::log(1.0 / eps)));
}

double small_ball_bound(Index d, double sigma, double eps) {
  if (d < 1) throw InvalidInput("small_ball_bound: d must be >= 1");
  if (!(sigma > 0.0)) throw InvalidInput("small_ball_bound: sigma must be positive");
  if (eps < 0.0) throw InvalidInput("small_ball_bound: eps must be nonnegative");
  return std::pow(eps / sigma, static_cast<double>(d));
}

double standard_normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double binomial_halfwidth(double p_hat, Index trials, double z) {
  if (trials <= 0) return std::numeric_limits<double>::infinity();
  return z * std::sqrt(std::max(p_hat * (1.0 - p_hat), 0.0) / static_cast<double>(trials));
}

}  // namespace condlp
