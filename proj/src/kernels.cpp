#include "condlp/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "condlp/polyhedra.hpp"

namespace condlp {

namespace {

// Euclidean projection onto the probability simplex (sort-based).
Vector project_simplex(const Vector& v) {
  const Index n = v.size();
  std::vector<double> u(v.data(), v.data() + n);
  std::sort(u.begin(), u.end(), std::greater<double>());
  double cum = 0.0, theta = 0.0;
  for (Index j = 0; j < n; ++j) {
    cum += u[static_cast<size_t>(j)];
    const double t = (cum - 1.0) / static_cast<double>(j + 1);
    if (u[static_cast<size_t>(j)] - t > 0.0) theta = t;
  }
  return (v.array() - theta).cwiseMax(0.0).matrix();
}

Vector project_cone_ball(const ConeDescriptor& cone, const Vector& p) {
  Vector q = cone.project_closure(p);
  const double n = q.norm();
  if (n > 1.0) q /= n;
  return q;
}

Vector default_direction(const ConeDescriptor& cone) { return -cone.separator(); }

}  // namespace

MaxMinResult maxmin_direction(const Matrix& M, const ConeDescriptor& cone, const Tolerances& tol) {
  if (!cone.is_orthant()) throw InvalidInput("maxmin_direction needs an orthant cone");
  if (M.rows() < 1) throw InvalidInput("maxmin_direction needs at least one row");
  if (M.cols() != cone.dim()) throw InvalidInput("row length must equal the cone dimension");
  require_finite(M, "rows");

  MaxMinResult res;
  double G = 0.0;
  for (Index i = 0; i < M.rows(); ++i) G = std::max(G, M.row(i).norm());
  auto f = [&](const Vector& p) { return (M * p).minCoeff(); };

  Vector best = default_direction(cone);
  double best_val = f(best);
  auto consider = [&](const Vector& p) {
    const double n = p.norm();
    if (!(n > 0.0)) return;
    Vector u = cone.project_closure(p / n);
    const double nu = u.norm();
    if (!(nu > 0.0)) return;
    u /= nu;
    const double v = f(u);
    if (v > best_val) {
      best_val = v;
      best = u;
    }
  };

  if (G == 0.0) {
    res.value = 0.0;
    res.upper = 0.0;
    res.dual = Vector::Constant(M.rows(), 1.0 / static_cast<double>(M.rows()));
    res.witness = best;
    res.converged = true;
    return res;
  }

  // projected supergradient ascent, step 1/(G sqrt(k))
  const long sg_iters = std::min<long>(tol.max_iters, 500);
  Vector p = project_cone_ball(cone, M.colwise().sum().transpose() / static_cast<double>(M.rows()));
  if (p.norm() == 0.0) p = best;
  consider(p);
  for (long it = 0; it < sg_iters; ++it) {
    Index imin;
    (M * p).minCoeff(&imin);
    p = project_cone_ball(cone, p + M.row(imin).transpose() / (G * std::sqrt(static_cast<double>(it + 1))));
    consider(p);
  }

  // dual: min over the simplex of ||Pi_K(M^T lambda)||, accelerated projected gradient;
  // every iterate gives an upper bound and a candidate direction
  const double L = std::pow(Eigen::JacobiSVD<Matrix>(M).singularValues()(0), 2);
  const Index m = M.rows();
  Vector lam = Vector::Constant(m, 1.0 / static_cast<double>(m));
  res.dual = lam;
  Vector y = lam;
  double t = 1.0;
  double upper = std::numeric_limits<double>::infinity();
  const double stop = tol.opt_tol * G;
  long it = 0;
  for (; it < tol.max_iters; ++it) {
    const Vector qy = cone.project_closure(M.transpose() * y);
    const Vector next = project_simplex(y - (M * qy) / L);
    const double tn = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    y = next + ((t - 1.0) / tn) * (next - lam);
    lam = next;
    t = tn;
    const Vector q = cone.project_closure(M.transpose() * lam);
    if (q.norm() < upper) {
      upper = q.norm();
      res.dual = lam;
    }
    consider(q);
    if (upper - std::max(best_val, 0.0) <= stop) break;
  }
  res.converged = upper - std::max(best_val, 0.0) <= stop;
  res.witness = best;
  res.value = f(best);
  res.upper = upper;
  return res;
}

LinearMaxResult max_linear_over_cone(const Vector& a, const Matrix& extra_rows,
                                     const ConeDescriptor& cone, const Tolerances& tol) {
  (void)tol;
  const Index k = cone.dim();
  if (a.size() != k) throw InvalidInput("a must match the cone dimension");
  if (extra_rows.rows() > 0 && extra_rows.cols() != k) throw InvalidInput("extra rows have wrong length");
  require_finite(a, "a");
  require_finite(extra_rows, "extra rows");
  LinearMaxResult res;

  if (cone.is_ray()) {
    const Vector& r = cone.as_ray().direction;
    if (extra_rows.rows() > 0 && (extra_rows * r).minCoeff() < 0.0)
      throw InvalidInput("region is empty");
    res.witness = r;
    res.value_lower = res.value_upper = a.dot(r);
    return res;
  }

  const std::vector<Index> sc = cone.signed_coordinates();
  Matrix G(extra_rows.rows() + static_cast<Index>(sc.size()), k);
  if (extra_rows.rows() > 0) G.topRows(extra_rows.rows()) = extra_rows;
  for (size_t j = 0; j < sc.size(); ++j) G.row(extra_rows.rows() + static_cast<Index>(j)) = Vector::Unit(k, sc[j]).transpose();
  for (Index i = 0; i < G.rows(); ++i) {
    const double n = G.row(i).norm();
    if (n > 0.0) G.row(i) /= n;
  }

  const double an = a.norm();
  auto in_region = [&](const Vector& p) { return G.rows() == 0 || (G * p).minCoeff() >= -1e-12; };

  // projection onto K via the polar: Pi_K(a) = a + G^T w, w = argmin ||a + G^T w||, w >= 0
  const Vector w = nnls(-G.transpose(), a);
  const Vector r = a + G.transpose() * w;
  const double rn = r.norm();
  if (an > 0.0 && rn > 1e-10 * an) {
    Vector p = r / rn;
    for (Index j : sc) p(j) = std::max(p(j), 0.0);
    p /= p.norm();
    if (in_region(p)) {
      res.witness = p;
      res.value_lower = a.dot(p);
      res.value_upper = std::max(rn, res.value_lower);
      return res;
    }
  }

  // a is (numerically) in the polar: the maximum over the sphere is attained on a generator
  const ConeGenerators gen = cone_generators(G);
  if (gen.rays.empty() && gen.lineality.empty()) throw InvalidInput("region is {0}");
  double best = -std::numeric_limits<double>::infinity();
  Vector arg;
  for (const Vector& l : gen.lineality) {
    const double v = std::abs(a.dot(l));
    if (v > best) {
      best = v;
      arg = a.dot(l) >= 0 ? l : Vector(-l);
    }
  }
  for (const Vector& ray : gen.rays) {
    const double v = a.dot(ray);
    if (v > best) {
      best = v;
      arg = ray;
    }
  }
  res.witness = arg;
  res.value_lower = best;
  // a certified member of the polar has max over the sphere attained on a generator
  bool polar = true;
  const double slack = 1e-12 * std::max(an, 1.0);
  for (const Vector& l : gen.lineality)
    if (std::abs(a.dot(l)) > slack) polar = false;
  for (const Vector& ray : gen.rays)
    if (a.dot(ray) > slack) polar = false;
  res.value_upper = polar ? best + slack : std::max(best, rn);
  return res;
}

DistanceResult frank_wolfe_distance(const Vector& z, const Vector& ray_dir,
                                    const std::vector<Vector>& points, const Tolerances& tol) {
  const Index d = z.size();
  const Index n = static_cast<Index>(points.size());
  if (n == 0) throw InvalidInput("frank_wolfe_distance needs at least one point");
  if (ray_dir.size() != d) throw InvalidInput("ray direction has wrong dimension");
  const double cn = ray_dir.norm();
  if (!(cn > 0.0)) throw InvalidInput("ray direction must be nonzero");
  double xmax = 0.0;
  for (const Vector& x : points) {
    if (x.size() != d) throw InvalidInput("point has wrong dimension");
    xmax = std::max(xmax, x.norm());
  }
  // any point closer than -x_1 has lambda below Lambda / 2, so truncating the ray is exact
  const double R0 = (points[0] + z).norm();
  const double Lambda = 2.0 * (z.norm() + R0 + xmax) / cn + 1.0;
  const double scale = std::max({1.0, z.norm(), xmax, R0});
  const double gap_tol = std::min(tol.opt_tol, 1e-8) * 1e-6 * scale * scale;

  // atoms (shifted by -z): a < n -> -x_a - z, a >= n -> Lambda c - x_{a-n} - z
  auto atom = [&](Index a) -> Vector {
    Vector v = -points[static_cast<size_t>(a % n)] - z;
    if (a >= n) v += Lambda * ray_dir;
    return v;
  };
  auto lmo = [&](const Vector& x, double* val) {
    const double xc = Lambda * x.dot(ray_dir);
    Index best = 0;
    double bv = std::numeric_limits<double>::infinity();
    for (Index a = 0; a < 2 * n; ++a) {
      const double v = -x.dot(points[static_cast<size_t>(a % n)] + z) + (a >= n ? xc : 0.0);
      if (v < bv) {
        bv = v;
        best = a;
      }
    }
    *val = bv;
    return best;
  };

  // Frank-Wolfe with fully corrective steps on the active set (Wolfe's minimum-norm-point scheme)
  std::vector<Index> S{0};
  std::vector<double> w{1.0};
  Vector x = atom(0);
  double gap = std::numeric_limits<double>::infinity();
  long it = 0;
  auto rebuild = [&]() {
    x.setZero();
    for (size_t i = 0; i < S.size(); ++i) x += w[i] * atom(S[i]);
  };
  for (; it < tol.max_iters; ++it) {
    double vmin;
    const Index v = lmo(x, &vmin);
    gap = x.squaredNorm() - vmin;
    if (gap <= gap_tol || x.norm() <= 1e-15 * scale) break;
    if (std::find(S.begin(), S.end(), v) != S.end()) break;  // no progress possible numerically
    S.push_back(v);
    w.push_back(0.0);
    for (int minor = 0; minor < 4 * static_cast<int>(d + 2) + 8; ++minor) {
      const Index k = static_cast<Index>(S.size());
      Matrix P(d, k);
      for (Index i = 0; i < k; ++i) P.col(i) = atom(S[static_cast<size_t>(i)]);
      Matrix K = Matrix::Zero(k + 1, k + 1);
      K.topLeftCorner(k, k) = P.transpose() * P;
      K.block(0, k, k, 1).setOnes();
      K.block(k, 0, 1, k).setOnes();
      Vector rhs = Vector::Zero(k + 1);
      rhs(k) = 1.0;
      const Vector sol = K.completeOrthogonalDecomposition().solve(rhs);
      const Vector alpha = sol.head(k);
      if (!alpha.allFinite()) break;
      if (alpha.minCoeff() > 1e-14) {
        for (Index i = 0; i < k; ++i) w[static_cast<size_t>(i)] = alpha(i);
        break;
      }
      double theta = 1.0;
      for (Index i = 0; i < k; ++i)
        if (alpha(i) <= 1e-14) theta = std::min(theta, w[static_cast<size_t>(i)] / (w[static_cast<size_t>(i)] - alpha(i)));
      std::vector<Index> S2;
      std::vector<double> w2;
      for (Index i = 0; i < k; ++i) {
        const double wi = theta * alpha(i) + (1.0 - theta) * w[static_cast<size_t>(i)];
        if (wi > 1e-15) {
          S2.push_back(S[static_cast<size_t>(i)]);
          w2.push_back(wi);
        }
      }
      if (S2.empty()) break;
      S = std::move(S2);
      w = std::move(w2);
    }
    double sum = 0.0;
    for (double& wi : w) {
      wi = std::max(wi, 0.0);
      sum += wi;
    }
    for (double& wi : w) wi /= sum;
    rebuild();
  }

  DistanceResult res;
  res.gamma = Vector::Zero(n);
  double wl = 0.0;
  for (size_t i = 0; i < S.size(); ++i) {
    res.gamma(S[i] % n) += w[i];
    if (S[i] >= n) wl += w[i];
  }
  res.lambda = Lambda * wl;
  res.nearest = res.lambda * ray_dir;
  for (Index i = 0; i < n; ++i) res.nearest -= res.gamma(i) * points[static_cast<size_t>(i)];
  const Vector g = res.nearest - z;
  double vmin;
  lmo(g, &vmin);
  gap = std::max(0.0, g.squaredNorm() - vmin);
  const double D = g.norm();
  res.gap = gap;
  res.distance_upper = D;
  res.distance_lower = std::sqrt(std::max(0.0, D * D - 2.0 * gap));
  res.converged = gap <= gap_tol || D <= 1e-12 * scale;
  return res;
}

}  // namespace condlp
