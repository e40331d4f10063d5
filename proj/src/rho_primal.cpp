#include "condlp/rho_primal.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "condlp/kernels.hpp"
#include "flip_search.hpp"

namespace condlp {

double rho_ray(const Vector& a, const Vector& p) {
  if (a.size() != p.size()) throw InvalidInput("rho_ray: dimension mismatch");
  if (std::abs(p.norm() - 1.0) > 1e-9) throw InvalidInput("rho_ray: p must have unit norm");
  return std::abs(a.dot(p));
}

double transition_bound(double alpha, double beta, double critical_norm) {
  if (!(alpha > 0.0) || !(beta > 0.0)) return 0.0;
  return std::min(alpha / 2.0, alpha * beta / (4.0 * alpha + 2.0 * critical_norm));
}

namespace {

ConicFeasibilityProblem with_rows(const ConicFeasibilityProblem& p, const std::vector<Index>& rows) {
  ConicFeasibilityProblem q;
  q.M.resize(static_cast<Index>(rows.size()), p.M.cols());
  for (size_t i = 0; i < rows.size(); ++i) q.M.row(static_cast<Index>(i)) = p.M.row(rows[i]);
  q.cone = p.cone;
  return q;
}

Matrix rows_of(const Matrix& M, const std::vector<Index>& rows) {
  Matrix out(static_cast<Index>(rows.size()), M.cols());
  for (size_t i = 0; i < rows.size(); ++i) out.row(static_cast<Index>(i)) = M.row(rows[i]);
  return out;
}

Vector unit_separator(const ConeDescriptor& cone) {
  Vector t = cone.separator();
  return t / t.norm();
}

}  // namespace

RhoInterval rho_single(const Vector& a, const ConeDescriptor& cone, const Tolerances& tol) {
  require_finite(a, "a");
  if (a.size() != cone.dim()) throw InvalidInput("rho_single: dimension mismatch");
  RhoInterval out;
  if (cone.is_ray()) {
    const Vector& p = cone.as_ray().direction;
    out.feasible = a.dot(p) >= 0.0;
    out.lower = out.upper = rho_ray(a, p);
    out.witness_direction = p;
    out.ill_posed = out.lower == 0.0;
    return out;
  }
  ConicFeasibilityProblem prob{Matrix(a.transpose()), cone};
  const FeasibilityResult f = is_feasible(prob, tol);
  out.feasible = f.feasible;
  out.ill_posed = std::abs(f.margin) <= tol.feas_tol;
  if (f.feasible) {
    const LinearMaxResult r = max_linear_over_cone(a, Matrix(a.transpose()), cone, tol);
    out.lower = std::max(0.0, r.value_lower);
    out.upper = std::max(out.lower, r.value_upper);
    out.witness_direction = r.witness;
    out.certified = r.certified;
  } else {
    const LinearMaxResult r = max_linear_over_cone(a, Matrix(0, a.size()), cone, tol);
    out.lower = std::max(0.0, -r.value_upper);
    out.upper = std::max(out.lower, -r.value_lower);
    out.witness_direction = r.witness;
    out.certified = r.certified;
  }
  return out;
}

RhoInterval rho_ray_cone(const ConicFeasibilityProblem& p, const Tolerances& tol) {
  p.validate();
  if (!p.cone.is_ray()) throw InvalidInput("rho_ray_cone needs a ray cone");
  const Vector& dir = p.cone.as_ray().direction;
  const FeasibilityResult f = is_feasible(p, tol);
  const Vector s = p.M * dir;
  RhoInterval out;
  out.feasible = f.feasible;
  out.witness_direction = dir;
  if (f.feasible) {
    out.lower = out.upper = s.minCoeff();
  } else {
    out.lower = out.upper = s.cwiseMin(0.0).norm();
  }
  out.ill_posed = out.lower == 0.0;
  return out;
}

RhoInterval feasible_lower_bound(const ConicFeasibilityProblem& p, const Tolerances& tol) {
  p.validate();
  if (p.cone.is_ray()) return rho_ray_cone(p, tol);
  const MaxMinResult r = maxmin_direction(p.M, p.cone, tol);
  RhoInterval out;
  out.feasible = true;
  out.lower = std::max(0.0, r.value);
  out.witness_direction = r.witness;
  return out;
}

RhoInterval feasible_helly_upper(const ConicFeasibilityProblem& p, const Tolerances& tol) {
  p.validate();
  RhoInterval out;
  out.feasible = true;
  out.lower = 0.0;
  for (Index i = 0; i < p.M.rows(); ++i) {
    const LinearMaxResult r = max_linear_over_cone(p.M.row(i).transpose(), p.M, p.cone, tol);
    out.upper = std::min(out.upper, std::max(0.0, r.value_upper));
  }
  return out;
}

InfeasibleLowerBound infeasible_lower_bound(const ConicFeasibilityProblem& p, int orders,
                                            const Tolerances& tol, std::uint64_t seed) {
  p.validate();
  const Index m = p.M.rows();
  InfeasibleLowerBound res;
  res.interval.feasible = false;
  std::vector<std::vector<Index>> perms;
  std::vector<Index> id(static_cast<size_t>(m));
  std::iota(id.begin(), id.end(), 0);
  perms.push_back(id);
  RandomStream rng(seed, 0x0bde5ULL);
  for (int o = 0; o < orders; ++o) {
    std::vector<Index> q = id;
    for (Index i = m - 1; i > 0; --i) std::swap(q[static_cast<size_t>(i)], q[static_cast<size_t>(rng.below(i + 1))]);
    perms.push_back(q);
  }
  double best = 0.0;
  for (const auto& order : perms) {
    // prefix feasibility is monotone, so binary search for the first infeasible prefix
    Index lo = 0, hi = m;  // prefix of length hi is infeasible; length lo feasible (empty is feasible)
    while (hi - lo > 1) {
      const Index mid = (lo + hi) / 2;
      std::vector<Index> pre(order.begin(), order.begin() + mid);
      if (is_feasible(with_rows(p, pre), tol).feasible)
        lo = mid;
      else
        hi = mid;
    }
    CriticalSplit split;
    split.order = order;
    split.prefix_length = hi - 1;
    split.critical_index = order[static_cast<size_t>(hi - 1)];
    const Vector a = p.M.row(split.critical_index).transpose();
    split.critical_norm = a.norm();
    if (hi == 1) {
      // a single infeasible row: its own distance bounds the system's from below
      const RhoInterval s = rho_single(a, p.cone, tol);
      split.bound = s.lower;
      split.alpha = kInf;
      split.beta = s.lower;
    } else {
      std::vector<Index> pre(order.begin(), order.begin() + (hi - 1));
      const Matrix P = rows_of(p.M, pre);
      if (p.cone.is_ray()) {
        const Vector& dir = p.cone.as_ray().direction;
        split.alpha = (P * dir).minCoeff();
        split.beta = -a.dot(dir);
      } else {
        const MaxMinResult mm = maxmin_direction(P, p.cone, tol);
        split.alpha = mm.value;
        LinearMaxResult lm;
        bool have_beta = true;
        try {
          lm = max_linear_over_cone(a, P, p.cone, tol);
        } catch (const SolverNonconvergence&) {
          have_beta = false;
        }
        split.beta = have_beta && lm.certified ? -lm.value_upper : 0.0;
      }
      split.bound = transition_bound(split.alpha, split.beta, split.critical_norm);
    }
    if (res.split.critical_index < 0 || split.bound > best) {
      best = std::max(best, split.bound);
      res.split = split;
    }
  }
  // every individually infeasible row is an infeasible subsystem too
  for (Index i = 0; i < m; ++i) {
    const Vector a = p.M.row(i).transpose();
    const RhoInterval s = rho_single(a, p.cone, tol);
    if (!s.feasible) best = std::max(best, s.lower);
  }
  res.interval.lower = best;
  return res;
}

bool flips(const ConicFeasibilityProblem& p, bool base_feasible, const Matrix& delta, const Tolerances& tol) {
  ConicFeasibilityProblem q{p.M + delta, p.cone};
  return is_feasible(q, tol).feasible != base_feasible;
}

double flip_radius_along(const ConicFeasibilityProblem& p, bool base_feasible, const Matrix& D,
                         double cap, double resolution, const Tolerances& tol, Matrix* flip) {
  return detail::flip_radius([&](const Matrix& d) { return flips(p, base_feasible, d, tol); },
                             [](const Matrix& d) { return d.norm(); }, D, cap, resolution, flip);
}

namespace {

auto primal_search(const ConicFeasibilityProblem& p, bool base, const Tolerances& tol, double cap, double resolution) {
  return detail::make_flip_search([&p, base, &tol](const Matrix& d) { return flips(p, base, d, tol); },
                                  [](const Matrix& d) { return d.norm(); }, cap, resolution);
}

// Local minimization of |(Mq)_-| over unit q in the closed cone.
Vector descend_violation(const Matrix& M, const ConeDescriptor& cone, Vector q, int iters) {
  const double L = std::max(1e-300, std::pow(Eigen::JacobiSVD<Matrix>(M).singularValues()(0), 2));
  q = cone.project_closure(q);
  if (q.norm() == 0.0) q = -cone.separator();
  q /= q.norm();
  for (int it = 0; it < iters; ++it) {
    const Vector v = (M * q).cwiseMin(0.0);
    if (v.norm() == 0.0) break;
    Vector nq = cone.project_closure(q - (M.transpose() * v) / L);
    const double n = nq.norm();
    if (n == 0.0) break;
    q = nq / n;
  }
  return q;
}

// Local minimization of |Pi_K(M^T y)| over unit y >= 0 (a dual infeasibility certificate direction).
Vector descend_certificate(const Matrix& M, const ConeDescriptor& cone, Vector y, int iters) {
  const double L = std::max(1e-300, std::pow(Eigen::JacobiSVD<Matrix>(M).singularValues()(0), 2));
  y = y.cwiseMax(0.0);
  if (y.norm() == 0.0) y = Vector::Ones(M.rows());
  y /= y.norm();
  for (int it = 0; it < iters; ++it) {
    const Vector q = cone.project_closure(M.transpose() * y);
    if (q.norm() == 0.0) break;
    Vector ny = (y - (M * q) / L).cwiseMax(0.0);
    const double n = ny.norm();
    if (n == 0.0) break;
    y = ny / n;
  }
  return y;
}

// Rank-one change making y a certificate of infeasibility: (M + D)^T y = Pi_polar(M^T y) + eta t.
Matrix certificate_flip(const Matrix& M, const ConeDescriptor& cone, const Vector& y, double eta) {
  const Vector yu = y / y.norm();
  const Vector q = cone.project_closure(M.transpose() * yu);
  const Vector t = cone.separator() / cone.separator().norm();
  return -yu * (q - eta * t).transpose();
}

// Rank-one change making q (pushed into the open cone) feasible for every row.
Matrix violation_flip(const Matrix& M, const ConeDescriptor& cone, const Vector& q, double zeta, double scale) {
  Vector qq = q;
  for (Index j : cone.as_orthant().strict) qq(j) = std::max(qq(j), zeta);
  qq /= qq.norm();
  const Vector s = M * qq;
  Matrix D(M.rows(), M.cols());
  for (Index i = 0; i < M.rows(); ++i) D.row(i) = std::max(0.0, zeta * scale - s(i)) * qq.transpose();
  return D;
}

}  // namespace

RhoInterval rho_upper_bound(const ConicFeasibilityProblem& p, int probes, const Tolerances& tol, std::uint64_t seed) {
  p.validate();
  const FeasibilityResult f = is_feasible(p, tol);
  const double norm = std::max(p.M.norm(), 1e-300);
  auto fs = primal_search(p, f.feasible, tol, 10.0 * norm, 1e-7 * norm);
  const Index m = p.M.rows(), k = p.M.cols();
  RandomStream rng(seed, 0xf11bULL);

  if (p.cone.is_orthant()) {
    const Vector t = unit_separator(p.cone);
    if (f.feasible) {
      // push one row into the polar of the region cut out by all rows, then tilt it out
      for (Index i = 0; i < m; ++i) {
        const Vector a = p.M.row(i).transpose();
        const LinearMaxResult r = max_linear_over_cone(a, p.M, p.cone, tol);
        const double v = std::max(0.0, r.value_lower);
        for (double eta : {1e-9, 1e-7, 1e-5, 1e-3}) {
          Matrix D = Matrix::Zero(m, k);
          D.row(i) = (-v * r.witness + eta * norm * t).transpose();
          const double before = fs.best;
          fs.offer(D);
          if (fs.best < before) break;
        }
      }
      // turn a nonnegative combination of the rows into an infeasibility certificate
      std::vector<Vector> starts;
      starts.push_back(maxmin_direction(p.M, p.cone, tol).dual);
      for (Index i = 0; i < m; ++i) starts.push_back(Vector::Unit(m, i));
      for (int s = 0; s < 8; ++s) starts.push_back(rng.normal_vector(m).cwiseAbs());
      for (Vector y : starts) {
        y = descend_certificate(p.M, p.cone, y, 300);
        for (double eta : {1e-9, 1e-7, 1e-5, 1e-3}) {
          const double before = fs.best;
          fs.offer(certificate_flip(p.M, p.cone, y, eta * norm));
          if (fs.best < before) break;
        }
      }
    } else {
      // make a single direction q feasible for every row: a_i += (eta - <a_i, q>)_+ q
      std::vector<Vector> starts;
      starts.push_back(maxmin_direction(p.M, p.cone, tol).witness);
      starts.push_back(-t);
      for (Index j : p.cone.signed_coordinates()) starts.push_back(Vector::Unit(k, j));
      for (int s = 0; s < 8; ++s) starts.push_back(rng.unit_vector(k));
      for (Vector q : starts) {
        q = descend_violation(p.M, p.cone, q, 300);
        for (double zeta : {1e-9, 1e-7, 1e-5, 1e-3}) {
          const double before = fs.best;
          fs.offer(violation_flip(p.M, p.cone, q, zeta, norm));
          if (fs.best < before) break;
        }
      }
    }
  } else {
    const Vector& dir = p.cone.as_ray().direction;
    const Vector s = p.M * dir;
    Matrix D = Matrix::Zero(m, k);
    if (f.feasible) {
      Index i;
      s.minCoeff(&i);
      for (double eta : {1e-9, 1e-6, 1e-3}) {
        D.setZero();
        D.row(i) = -(s(i) + eta * norm) * dir.transpose();
        fs.offer(D);
      }
    } else {
      for (Index i = 0; i < m; ++i) D.row(i) = std::max(0.0, -s(i)) * dir.transpose();
      fs.offer(D);
    }
  }

  Matrix bestD;
  double bestr = kInf;
  for (int s = 0; s < probes; ++s) {
    const Matrix D = rng.normal_matrix(m, k);
    const double r = fs.along(D);
    if (r < bestr) {
      bestr = r;
      bestD = D;
    }
  }
  if (std::isfinite(fs.best)) {
    Matrix start = fs.best_delta;
    fs.refine(start, probes / 2, rng);
    if (bestD.size()) fs.refine(bestD, probes / 4, rng);
  }

  RhoInterval out;
  out.feasible = f.feasible;
  out.lower = 0.0;
  out.upper = fs.best;
  if (std::isfinite(fs.best)) {
    out.witness_perturbation = fs.best_delta;
    out.upper = fs.best_delta.norm();
  }
  out.certified = false;
  return out;
}

OracleInterval brute_force_rho(const ConicFeasibilityProblem& p, double resolution, int samples,
                               std::uint64_t seed, const Tolerances& tol) {
  p.validate();
  if (p.M.rows() > 4 || p.M.cols() > 3)
    throw InvalidInput("brute_force_rho is limited to at most 4 rows and 3 columns");
  if (!(resolution > 0.0)) throw InvalidInput("resolution must be positive");
  const bool base = is_feasible(p, tol).feasible;
  const double norm = std::max(p.M.norm(), 1e-300);
  auto fs = primal_search(p, base, tol, 10.0 * norm, resolution / 4.0);
  RandomStream rng(seed, 0x0c1eULL);
  struct Cand {
    double r;
    Matrix D;
  };
  std::vector<Cand> cands;
  for (int s = 0; s < samples; ++s) {
    const Matrix D = rng.normal_matrix(p.M.rows(), p.M.cols());
    const double r = fs.along(D);
    if (std::isfinite(r)) cands.push_back({r, D});
  }
  std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) { return a.r < b.r; });
  for (size_t c = 0; c < std::min<size_t>(3, cands.size()); ++c) fs.refine(cands[c].D, std::max(20, samples / 4), rng);

  // certificate directions sampled uniformly, then a local random search on the closed-form cost
  if (p.cone.is_orthant()) {
    const Index m = p.M.rows(), k = p.M.cols();
    const std::vector<Index> sc = p.cone.signed_coordinates();
    auto draw = [&]() -> Vector {
      if (base) return rng.normal_vector(m).cwiseAbs().normalized();
      Vector q = rng.normal_vector(k);
      for (Index j : sc) q(j) = std::abs(q(j));
      return q.normalized();
    };
    auto cost = [&](const Vector& v) {
      return base ? p.cone.project_closure(p.M.transpose() * v).norm() : (p.M * v).cwiseMin(0.0).norm();
    };
    auto legal = [&](Vector v) -> Vector {
      if (base) return v.cwiseMax(0.0);
      for (Index j : sc) v(j) = std::max(v(j), 0.0);
      return v;
    };
    std::vector<std::pair<double, Vector>> pool;
    for (int s = 0; s < 20 * samples; ++s) {
      const Vector v = draw();
      pool.push_back({cost(v), v});
    }
    std::sort(pool.begin(), pool.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    for (size_t c = 0; c < std::min<size_t>(5, pool.size()); ++c) {
      Vector v = pool[c].second;
      double cv = pool[c].first;
      double tau = 0.2;
      for (int it = 0; it < 400 && tau > 1e-7; ++it) {
        Vector w = legal(v + tau * rng.normal_vector(v.size()));
        if (w.norm() == 0.0) continue;
        w.normalize();
        const double cw = cost(w);
        if (cw < cv) {
          v = w;
          cv = cw;
        } else if (it % 8 == 7) {
          tau *= 0.6;
        }
      }
      for (double eta : {1e-9, 1e-7, 1e-5, 1e-3}) {
        const double before = fs.best;
        fs.offer(base ? certificate_flip(p.M, p.cone, v, eta * norm) : violation_flip(p.M, p.cone, v, eta, norm));
        if (fs.best < before) break;
      }
    }
  }
  OracleInterval out;
  out.upper = fs.best;
  out.lower = std::isfinite(fs.best) ? std::max(0.0, fs.best - resolution) : 10.0 * norm;
  return out;
}

namespace {

RhoInterval primal_rho_unit(const ConicFeasibilityProblem& p, const RhoOptions& opt) {
  const Tolerances& tol = opt.tol;
  const FeasibilityResult f = is_feasible(p, tol);
  RhoInterval out;
  out.feasible = f.feasible;
  const double norm = p.M.norm();
  if (std::abs(f.margin) <= tol.feas_tol) {
    out.ill_posed = true;
    out.lower = 0.0;
    out.upper = 1e-7 * norm;
    out.certified = false;
    return out;
  }
  double analytic_upper = kInf;
  if (f.feasible) {
    const RhoInterval lo = feasible_lower_bound(p, tol);
    out.lower = lo.lower;
    out.witness_direction = lo.witness_direction;
    analytic_upper = feasible_helly_upper(p, tol).upper;
  } else {
    const InfeasibleLowerBound lo = infeasible_lower_bound(p, opt.orders, tol, opt.seed);
    out.lower = lo.interval.lower;
  }
  const RhoInterval up = rho_upper_bound(p, opt.probes, tol, opt.seed);
  if (up.upper <= analytic_upper) {
    out.upper = up.upper;
    out.witness_perturbation = up.witness_perturbation;
  } else {
    out.upper = analytic_upper;
  }
  if (out.lower > out.upper) {
    // only round-off can cause this; both sides are sound
    out.lower = out.upper;
  }
  out.ill_posed = out.upper <= tol.feas_tol * std::max(norm, 1.0);
  return out;
}

}  // namespace

// Works on M / |M|_F so that the interval scales exactly with the data.
RhoInterval primal_rho(const ConicFeasibilityProblem& p, const RhoOptions& opt) {
  p.validate();
  if (p.cone.is_ray()) return rho_ray_cone(p, opt.tol);
  const double norm = p.M.norm();
  if (norm == 0.0) {
    RhoInterval out;
    out.feasible = is_feasible(p, opt.tol).feasible;
    out.lower = out.upper = 0.0;
    out.ill_posed = true;
    return out;
  }
  RhoInterval out = primal_rho_unit(ConicFeasibilityProblem{p.M / norm, p.cone}, opt);
  out.lower *= norm;
  out.upper *= norm;
  if (out.witness_perturbation) *out.witness_perturbation *= norm;
  return out;
}

}  // namespace condlp
