#pragma once

#include <cmath>

#include "condlp/numerics.hpp"
#include "condlp/rho_primal.hpp"

namespace condlp::detail {

// Smallest s on a doubling grid then bisection with flips(s D / |D|) true; +inf if none up to cap.
template <class Flips, class Metric>
double flip_radius(const Flips& flips, const Metric& metric, const Matrix& D, double cap, double resolution,
                   Matrix* flip) {
  const double dn = metric(D);
  if (!(dn > 0.0) || !(cap > 0.0)) return kInf;
  const Matrix U = D / dn;
  double s = cap * std::ldexp(1.0, -24);
  double prev = 0.0;
  bool found = false;
  while (s <= cap * (1.0 + 1e-12)) {
    if (flips(s * U)) {
      found = true;
      break;
    }
    prev = s;
    s *= 2.0;
  }
  if (!found) return kInf;
  double lo = prev, hi = s;
  while (hi - lo > resolution) {
    const double mid = 0.5 * (lo + hi);
    if (flips(mid * U))
      hi = mid;
    else
      lo = mid;
  }
  if (flip) *flip = hi * U;
  return hi;
}

template <class Flips, class Metric>
struct FlipSearch {
  Flips flips;
  Metric metric;
  double cap;
  double resolution;
  double best = kInf;
  Matrix best_delta = Matrix();

  void offer(const Matrix& delta) {
    const double n = metric(delta);
    if (n < best && flips(delta)) {
      best = n;
      best_delta = delta;
    }
  }

  double along(const Matrix& D) {
    Matrix f;
    const double r = flip_radius(flips, metric, D, std::isfinite(best) ? std::min(cap, best) : cap, resolution, &f);
    if (r < best) {
      best = r;
      best_delta = f;
    }
    return r;
  }

  // pattern search on the unit sphere of perturbation directions
  void refine(Matrix D, int budget, RandomStream& rng) {
    if (!std::isfinite(best)) return;
    D /= metric(D);
    double r = best;
    double tau = 0.5;
    int fails = 0;
    const double scale = 1.0 / std::sqrt(static_cast<double>(D.size()));
    for (int it = 0; it < budget && tau > 1e-3; ++it) {
      Matrix E = D + tau * scale * rng.normal_matrix(D.rows(), D.cols());
      E /= metric(E);
      Matrix f;
      const double re = flip_radius(flips, metric, E, r, resolution, &f);
      if (re < r) {
        r = re;
        D = E;
        fails = 0;
        if (re < best) {
          best = re;
          best_delta = f;
        }
      } else if (++fails >= 4) {
        tau *= 0.5;
        fails = 0;
      }
    }
  }
};

template <class Flips, class Metric>
FlipSearch<Flips, Metric> make_flip_search(Flips f, Metric m, double cap, double resolution) {
  return FlipSearch<Flips, Metric>{f, m, cap, resolution};
}

}  // namespace condlp::detail
