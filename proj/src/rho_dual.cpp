#include "condlp/rho_dual.hpp"

#include <algorithm>
#include <cmath>

#include "condlp/errors.hpp"
#include "condlp/kernels.hpp"
#include "condlp/lp.hpp"
#include "condlp/polyhedra.hpp"
#include "flip_search.hpp"

namespace condlp {

DualDecomposition decompose(const Matrix& rows, const Vector& c) {
  if (rows.rows() == 0) throw InvalidInput("decompose needs at least one row");
  if (c.size() != rows.cols()) throw InvalidInput("c must have one entry per column of A");
  DualDecomposition d;
  d.z = rows.colwise().mean().transpose();
  d.c = c;
  d.k2 = c.norm();
  for (Index i = 0; i < rows.rows(); ++i) {
    d.xs.push_back(rows.row(i).transpose() - d.z);
    d.max_row_norm = std::max(d.max_row_norm, rows.row(i).norm());
  }
  return d;
}

namespace {

Matrix rows_of(const DualDecomposition& d) {
  Matrix A(static_cast<Index>(d.xs.size()), d.z.size());
  for (size_t i = 0; i < d.xs.size(); ++i) A.row(static_cast<Index>(i)) = (d.z + d.xs[i]).transpose();
  return A;
}

double geometry_scale(const DualDecomposition& d) {
  double mx = 0.0;
  for (const Vector& x : d.xs) mx = std::max(mx, x.norm());
  return std::max(1.0, d.z.norm() + mx);
}

void require_nondegenerate(const DualDecomposition& d, const Tolerances& tol) {
  if (!(d.c.norm() > tol.feas_tol)) throw DegenerateC("c is numerically zero");
}

// Largest t with z + t u in ray(c) - hull(xs), +inf when unbounded.
double exit_distance(const DualDecomposition& d, const Vector& u, const Tolerances& tol) {
  const Index n = static_cast<Index>(d.xs.size()), k = d.z.size();
  LinearProgram lp(n + 2);  // lambda, gamma_1..n, t
  for (Index i = 0; i <= n; ++i) lp.set_nonneg(i);
  for (Index j = 0; j < k; ++j) {
    Vector row = Vector::Zero(n + 2);
    row(0) = d.c(j);
    for (Index i = 0; i < n; ++i) row(1 + i) = -d.xs[static_cast<size_t>(i)](j);
    row(n + 1) = -u(j);
    lp.add(row, Sense::Eq, d.z(j));
  }
  Vector sum = Vector::Zero(n + 2);
  sum.segment(1, n).setOnes();
  lp.add(sum, Sense::Eq, 1.0);
  lp.objective = Vector::Unit(n + 2, n + 1);
  const LpSolution s = solve_lp(lp, tol);
  if (s.status == LpStatus::Unbounded) return kInf;
  if (s.status != LpStatus::Optimal) return 0.0;
  return std::max(0.0, s.objective);
}

}  // namespace

Membership membership(const DualDecomposition& d, const Tolerances& tol) {
  require_nondegenerate(d, tol);
  const bool inside = is_feasible(DualEqualityProblem{rows_of(d), d.c}, tol);
  const double eps = tol.feas_tol * geometry_scale(d);
  if (!inside) {
    const DistanceResult r = frank_wolfe_distance(d.z, d.c, d.xs, tol);
    return r.distance_upper <= eps ? Membership::Boundary : Membership::Outside;
  }
  if (d.z.size() <= kMaxFacetDimension) {
    try {
      if (inside_distance(d.z, facet_enumeration(d.c, d.xs)) <= eps) return Membership::Boundary;
    } catch (const InvalidInput&) {
      return Membership::Boundary;  // LP and facets disagree only at the boundary
    }
  }
  return Membership::Inside;
}

K1Interval compute_k1(const DualDecomposition& d, const Tolerances& tol, int sampling_directions,
                      std::uint64_t seed) {
  require_nondegenerate(d, tol);
  K1Interval out;
  out.inside = is_feasible(DualEqualityProblem{rows_of(d), d.c}, tol);
  if (!out.inside) {
    const DistanceResult r = frank_wolfe_distance(d.z, d.c, d.xs, tol);
    out.lower = r.distance_lower;
    out.upper = r.distance_upper;
    out.certified = r.converged;
    return out;
  }
  if (d.z.size() <= kMaxFacetDimension) {
    double v = 0.0;
    try {
      v = inside_distance(d.z, facet_enumeration(d.c, d.xs));
    } catch (const InvalidInput&) {
      v = 0.0;
    }
    out.lower = out.upper = v;
    return out;
  }
  // sampled exit distances only bound the true distance from above
  RandomStream rng(seed, 0x6b31ULL);
  double best = kInf;
  for (int s = 0; s < sampling_directions; ++s) best = std::min(best, exit_distance(d, rng.unit_vector(d.z.size()), tol));
  out.lower = out.upper = std::isfinite(best) ? best : 0.0;
  out.certified = false;
  return out;
}

double dual_geometry_bound(double k1, double k2, double max_row_norm) {
  if (!(k1 > 0.0) || !(k2 > 0.0)) return 0.0;
  const double m = std::max({8.0 / k1, 4.0 / k2, 24.0 * max_row_norm / (k1 * k2)});
  return 1.0 / m;
}

RhoInterval dual_rho_lower_bound(const DualDecomposition& d, const Tolerances& tol) {
  require_nondegenerate(d, tol);
  const K1Interval k1 = d.k1 ? *d.k1 : compute_k1(d, tol);
  RhoInterval out;
  out.feasible = k1.inside;
  out.certified = k1.certified;
  if (k1.lower <= tol.feas_tol) {
    out.ill_posed = true;
    out.lower = 0.0;
    return out;
  }
  out.lower = dual_geometry_bound(k1.lower, d.k2, d.max_row_norm);
  return out;
}

PerturbationRadii perturbation_tolerance(const DualDecomposition& d, double alpha) {
  if (!(alpha > 0.0)) throw InvalidInput("alpha must be positive");
  const K1Interval k1 = d.k1 ? *d.k1 : compute_k1(d);
  if (!(alpha < k1.lower)) throw InvalidInput("alpha must be smaller than k1");
  double mx = 0.0;
  for (const Vector& x : d.xs) mx = std::max(mx, x.norm());
  PerturbationRadii r;
  r.dx_max = r.dz_max = alpha / 4.0;
  r.dc_max = alpha * d.c.norm() / (2.0 * alpha + 4.0 * (d.z.norm() + mx));
  return r;
}

bool dual_flips(const DualEqualityProblem& p, bool base_feasible, const DualPerturbation& d, const Tolerances& tol) {
  return is_feasible(DualEqualityProblem{p.A + d.dA, p.c + d.dc}, tol) != base_feasible;
}

namespace {

// Perturbations are stacked as [dA; dc^T].
DualPerturbation unstack(const Matrix& P) {
  const Index n = P.rows() - 1;
  return {P.topRows(n), P.row(n).transpose()};
}

double metric(const Matrix& P) {
  const Index n = P.rows() - 1;
  return P.topRows(n).norm() + P.row(n).norm();
}

Matrix stack(const DualPerturbation& d) {
  Matrix P(d.dA.rows() + 1, d.dA.cols());
  P.topRows(d.dA.rows()) = d.dA;
  P.row(d.dA.rows()) = d.dc.transpose();
  return P;
}

auto dual_search(const DualEqualityProblem& p, bool base, const Tolerances& tol, double cap, double resolution) {
  return detail::make_flip_search([&p, base, &tol](const Matrix& P) { return dual_flips(p, base, unstack(P), tol); },
                                  metric, cap, resolution);
}

// Cost of making w a Farkas certificate for {A^T y = c, y >= 0}: |(Aw)_+| + (-<c,w>)_+.
double separation_cost(const Matrix& A, const Vector& c, const Vector& w) {
  return (A * w).cwiseMax(0.0).norm() + std::max(0.0, -c.dot(w));
}

DualPerturbation separation_flip(const Matrix& A, const Vector& c, const Vector& w, double eta) {
  const Vector s = A * w;
  DualPerturbation d{Matrix::Zero(A.rows(), A.cols()), Vector::Zero(c.size())};
  for (Index i = 0; i < A.rows(); ++i)
    if (s(i) > 0.0) d.dA.row(i) = -s(i) * w.transpose();
  const double cw = c.dot(w);
  if (cw < eta) d.dc = (eta - cw) * w;
  return d;
}

// Absorb r = c - A^T y in A when |y| > 1, otherwise in c; costs |r| min(1, 1/|y|).
DualPerturbation combination_flip(const Matrix& A, const Vector& c, const Vector& y) {
  const Vector r = c - A.transpose() * y;
  DualPerturbation d{Matrix::Zero(A.rows(), A.cols()), Vector::Zero(c.size())};
  const double yn = y.norm();
  if (yn > 1.0)
    d.dA = y * r.transpose() / (yn * yn);
  else
    d.dc = -r;
  return d;
}

// In v = (t, u) with y = u / t the cost is |t c - A^T u| / max(t, |u|); descend on that
// normalized sphere of the nonnegative cone.
Vector descend_combination(const Matrix& A, const Vector& c, Vector v, int iters) {
  const Index n = A.rows();
  auto normalize = [](Vector w) {
    w = w.cwiseMax(0.0);
    const double N = std::max(w(0), w.tail(w.size() - 1).norm());
    return N > 0.0 ? Vector(w / N) : w;
  };
  auto h = [&](const Vector& w) { return (w(0) * c - A.transpose() * w.tail(n)).norm(); };
  v = normalize(v);
  Vector best = v;
  double bh = h(v);
  const double G = std::max(1e-300, A.norm() + c.norm());
  for (int it = 1; it <= iters; ++it) {
    const Vector r = v(0) * c - A.transpose() * v.tail(n);
    const double rn = r.norm();
    if (rn == 0.0) break;
    Vector g(n + 1);
    g(0) = c.dot(r) / rn;
    g.tail(n) = -(A * r) / rn;
    const Vector w = normalize(v - (0.5 / (G * std::sqrt(static_cast<double>(it)))) * g);
    if (w.norm() == 0.0) break;
    v = w;
    const double hv = h(v);
    if (hv < bh) {
      bh = hv;
      best = v;
    }
  }
  return best;
}

// The infimum can sit at t -> 0 (y unbounded), so small t are tried on a ladder.
template <class Search>
void offer_combination(Search& fs, const Matrix& A, const Vector& c, const Vector& v) {
  const Vector u = v.tail(v.size() - 1);
  fs.offer(stack(combination_flip(A, c, u / std::max(v(0), 1e-6))));
  if (v(0) < 1e-2 && u.norm() > 0.0)
    for (double t : {1e-2, 1e-3, 1e-4, 1e-5}) fs.offer(stack(combination_flip(A, c, u / t)));
}

Vector descend_separation(const Matrix& A, const Vector& c, Vector w, int iters) {
  w.normalize();
  Vector best = w;
  double bc = separation_cost(A, c, w);
  const double G = std::max(1e-300, A.norm() + c.norm());
  for (int it = 1; it <= iters; ++it) {
    const Vector s = (A * w).cwiseMax(0.0);
    Vector g = Vector::Zero(w.size());
    const double sn = s.norm();
    if (sn > 0.0) g += A.transpose() * s / sn;
    if (c.dot(w) < 0.0) g -= c;
    g -= g.dot(w) * w;
    if (g.norm() == 0.0) break;
    w -= (0.5 / (G * std::sqrt(static_cast<double>(it)))) * g;
    w.normalize();
    const double cw = separation_cost(A, c, w);
    if (cw < bc) {
      bc = cw;
      best = w;
    }
  }
  return best;
}

template <class Search>
void offer_separation(Search& fs, const Matrix& A, const Vector& c, const Vector& w, double norm) {
  for (double eta : {1e-9, 1e-7, 1e-5, 1e-3}) {
    const double before = fs.best;
    fs.offer(stack(separation_flip(A, c, w, eta * norm)));
    if (fs.best < before) break;
  }
}

}  // namespace

DualRhoInterval dual_rho_upper_bound(const DualEqualityProblem& p, int probes, const Tolerances& tol,
                                     std::uint64_t seed) {
  const Index n = p.A.rows(), k = p.A.cols();
  if (p.c.size() != k) throw InvalidInput("c must have one entry per column of A");
  const bool base = is_feasible(p, tol);
  const double norm = std::max(p.A.norm() + p.c.norm(), 1e-300);
  auto fs = dual_search(p, base, tol, 10.0 * norm, 1e-7 * norm);
  RandomStream rng(seed, 0xd0a1ULL);

  if (base) {
    // move rows and c so that some w separates c from the cone of the rows
    std::vector<Vector> starts;
    if (p.c.norm() > 0.0) starts.push_back(p.c.normalized());
    if (k <= 6) {
      const ConeGenerators polar = cone_generators(-p.A);
      for (const Vector& r : polar.rays) starts.push_back(r);
      for (const Vector& l : polar.lineality) {
        starts.push_back(l);
        starts.push_back(-l);
      }
    }
    for (Index i = 0; i < n; ++i)
      if (p.A.row(i).norm() > 0.0) starts.push_back(-p.A.row(i).transpose().normalized());
    for (int s = 0; s < 8; ++s) starts.push_back(rng.unit_vector(k));
    for (const Vector& w0 : starts) offer_separation(fs, p.A, p.c, descend_separation(p.A, p.c, w0, 300), norm);
  } else {
    // pick y >= 0 and absorb the residual c - A^T y in A or in c
    fs.offer(stack(combination_flip(p.A, p.c, Vector::Zero(n))));
    const Vector y0 = nnls(p.A.transpose(), p.c);
    std::vector<Vector> starts;
    auto start = [&](double t, const Vector& u) {
      Vector v(n + 1);
      v(0) = t;
      v.tail(n) = u;
      starts.push_back(v);
    };
    start(1.0, Vector::Zero(n));
    start(1.0, y0);
    start(1.0 / std::max(1.0, y0.norm()), y0 / std::max(1.0, y0.norm()));
    for (Index i = 0; i < n; ++i) {
      start(1.0, Vector::Unit(n, i));
      start(1e-3, Vector::Unit(n, i));
    }
    for (int s = 0; s < 8; ++s) start(rng.uniform(), rng.normal_vector(n).cwiseAbs());
    for (const Vector& v0 : starts) offer_combination(fs, p.A, p.c, descend_combination(p.A, p.c, v0, 400));
    fs.offer(stack(combination_flip(p.A, p.c, y0)));
  }

  Matrix bestD;
  double bestr = kInf;
  for (int s = 0; s < probes; ++s) {
    const Matrix D = rng.normal_matrix(n + 1, k);
    const double r = fs.along(D);
    if (r < bestr) {
      bestr = r;
      bestD = D;
    }
  }
  if (std::isfinite(fs.best)) {
    fs.refine(fs.best_delta, probes / 2, rng);
    if (bestD.size()) fs.refine(bestD, probes / 4, rng);
  }

  DualRhoInterval out;
  out.rho.feasible = base;
  out.rho.upper = fs.best;
  out.rho.certified = false;
  if (std::isfinite(fs.best)) {
    out.witness = unstack(fs.best_delta);
    out.rho.upper = out.witness->norm();
  }
  return out;
}

OracleInterval dual_brute_force_rho(const DualEqualityProblem& p, double resolution, int samples,
                                    std::uint64_t seed, const Tolerances& tol) {
  const Index n = p.A.rows(), k = p.A.cols();
  if (n > 4 || k > 3) throw InvalidInput("dual_brute_force_rho is limited to at most 4 rows and 3 columns");
  if (p.c.size() != k) throw InvalidInput("c must have one entry per column of A");
  if (!(resolution > 0.0)) throw InvalidInput("resolution must be positive");
  const bool base = is_feasible(p, tol);
  const double norm = std::max(p.A.norm() + p.c.norm(), 1e-300);
  auto fs = dual_search(p, base, tol, 10.0 * norm, resolution / 4.0);
  RandomStream rng(seed, 0xd0c1eULL);

  struct Cand {
    double r;
    Matrix D;
  };
  std::vector<Cand> cands;
  for (int s = 0; s < samples; ++s) {
    const Matrix D = rng.normal_matrix(n + 1, k);
    const double r = fs.along(D);
    if (std::isfinite(r)) cands.push_back({r, D});
  }
  std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) { return a.r < b.r; });
  for (size_t c = 0; c < std::min<size_t>(3, cands.size()); ++c) fs.refine(cands[c].D, std::max(20, samples / 4), rng);

  // sampled certificates (w when feasible, y otherwise) with a random local search on the closed-form cost
  // infeasible side works in v = (t, u), y = u / t, normalized by max(t, |u|)
  auto draw = [&]() -> Vector {
    if (base) return rng.unit_vector(k);
    Vector v(n + 1);
    if (rng.uniform() < 0.5) {
      v(0) = 1.0;
      v.tail(n) = rng.uniform() * rng.normal_vector(n).cwiseAbs().normalized();
    } else {
      v(0) = std::pow(10.0, -6.0 * rng.uniform());
      v.tail(n) = rng.normal_vector(n).cwiseAbs().normalized();
    }
    return v;
  };
  auto normalized = [&](Vector v) -> Vector {
    if (base) return v.normalized();
    v = v.cwiseMax(0.0);
    const double N = std::max(v(0), v.tail(n).norm());
    return N > 0.0 ? Vector(v / N) : v;
  };
  auto cost = [&](const Vector& v) {
    return base ? separation_cost(p.A, p.c, v) : (v(0) * p.c - p.A.transpose() * v.tail(n)).norm();
  };
  std::vector<std::pair<double, Vector>> pool;
  for (int s = 0; s < 20 * samples; ++s) {
    const Vector v = draw();
    pool.push_back({cost(v), v});
  }
  if (!base) pool.push_back({cost(Vector::Unit(n + 1, 0)), Vector::Unit(n + 1, 0)});
  std::sort(pool.begin(), pool.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  for (size_t c = 0; c < std::min<size_t>(5, pool.size()); ++c) {
    Vector v = pool[c].second;
    double cv = pool[c].first;
    double tau = 0.2;
    for (int it = 0; it < 400 && tau > 1e-8; ++it) {
      const Vector w = normalized(v + tau * rng.normal_vector(v.size()));
      if (w.norm() == 0.0) continue;
      const double cw = cost(w);
      if (cw < cv) {
        v = w;
        cv = cw;
      } else if (it % 8 == 7) {
        tau *= 0.6;
      }
    }
    if (base)
      offer_separation(fs, p.A, p.c, v, norm);
    else
      offer_combination(fs, p.A, p.c, v);
  }

  OracleInterval out;
  out.upper = fs.best;
  out.lower = std::isfinite(fs.best) ? std::max(0.0, fs.best - resolution) : 10.0 * norm;
  return out;
}

DualRhoInterval dual_rho(const DualEqualityProblem& p, const RhoOptions& opt) {
  const Tolerances& tol = opt.tol;
  // work on (A, c) / (|A|_F + |c|) so that the interval scales exactly with the data
  const double scale = p.A.norm() + p.c.norm();
  if (!(scale > 0.0)) throw DegenerateC("c is numerically zero");
  const DualEqualityProblem q{p.A / scale, p.c / scale};
  DualDecomposition d = decompose(q.A, q.c);
  require_nondegenerate(d, tol);
  d.k1 = compute_k1(d, tol, opt.k1_samples, opt.seed);
  const RhoInterval low = dual_rho_lower_bound(d, tol);
  DualRhoInterval out = dual_rho_upper_bound(q, opt.probes, tol, opt.seed);
  out.rho.lower = low.lower * scale;
  out.rho.upper *= scale;
  if (out.witness) {
    out.witness->dA *= scale;
    out.witness->dc *= scale;
  }
  out.rho.ill_posed = low.ill_posed;
  out.rho.certified = low.certified && d.k1->certified;
  return out;
}

}  // namespace condlp
