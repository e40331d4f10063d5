#pragma once
// Independent reference computations used only by the tests. Deliberately
// naive: grids, exhaustive vertex enumeration, direct sampling.

#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "condlp/lp.hpp"
#include "condlp/numerics.hpp"

namespace oracle {

using condlp::Index;
using condlp::Matrix;
using condlp::Vector;

// Max of f over the unit circle restricted to angles in [lo, hi].
inline double grid_max_circle(const std::function<double(const Vector&)>& f, double lo, double hi,
                              double step, Vector* arg = nullptr) {
  double best = -std::numeric_limits<double>::infinity();
  for (double th = lo; th <= hi + 1e-15; th += step) {
    Vector p(2);
    p << std::cos(th), std::sin(th);
    const double v = f(p);
    if (v > best) {
      best = v;
      if (arg) *arg = p;
    }
  }
  return best;
}

// Max of f over the unit sphere in R^3 (latitude/longitude grid), restricted by keep(p).
inline double grid_max_sphere3(const std::function<double(const Vector&)>& f,
                               const std::function<bool(const Vector&)>& keep, int steps) {
  double best = -std::numeric_limits<double>::infinity();
  const double pi = std::acos(-1.0);
  for (int i = 0; i <= steps; ++i) {
    const double th = pi * i / steps;
    const int nphi = std::max(1, static_cast<int>(2 * steps * std::sin(th)));
    for (int j = 0; j < nphi; ++j) {
      const double ph = 2 * pi * j / nphi;
      Vector p(3);
      p << std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th);
      if (keep(p)) best = std::max(best, f(p));
    }
  }
  return best;
}

// Feasibility of {rows x (sense) rhs, bounds} in <= 3 variables by enumerating
// every vertex of the system intersected with the box |x_j| <= box.
inline bool vertex_enumeration_feasible(const condlp::LinearProgram& lp, double box = 1e3,
                                        double tol = 1e-7) {
  const Index n = lp.num_vars;
  std::vector<Vector> rows;
  std::vector<double> rhs;
  std::vector<int> kind;  // 0: <=, 1: >=, 2: ==
  for (size_t i = 0; i < lp.rows.size(); ++i) {
    rows.push_back(lp.rows[i]);
    rhs.push_back(lp.rhs[i]);
    kind.push_back(lp.senses[i] == condlp::Sense::Le ? 0 : lp.senses[i] == condlp::Sense::Ge ? 1 : 2);
  }
  for (Index j = 0; j < n; ++j) {
    rows.push_back(Vector::Unit(n, j));
    rhs.push_back(box);
    kind.push_back(0);
    rows.push_back(Vector::Unit(n, j));
    rhs.push_back(lp.nonneg[static_cast<size_t>(j)] ? 0.0 : -box);
    kind.push_back(1);
  }
  const Index m = static_cast<Index>(rows.size());
  auto ok = [&](const Vector& x) {
    for (Index i = 0; i < m; ++i) {
      const double v = rows[static_cast<size_t>(i)].dot(x) - rhs[static_cast<size_t>(i)];
      const int k = kind[static_cast<size_t>(i)];
      if (k == 0 && v > tol) return false;
      if (k == 1 && v < -tol) return false;
      if (k == 2 && std::abs(v) > tol) return false;
    }
    return true;
  };
  std::vector<Index> pick(static_cast<size_t>(n));
  std::function<bool(Index, Index)> rec = [&](Index pos, Index start) -> bool {
    if (pos == n) {
      Matrix S(n, n);
      Vector r(n);
      for (Index t = 0; t < n; ++t) {
        S.row(t) = rows[static_cast<size_t>(pick[static_cast<size_t>(t)])].transpose();
        r(t) = rhs[static_cast<size_t>(pick[static_cast<size_t>(t)])];
      }
      Eigen::FullPivLU<Matrix> lu(S);
      if (lu.rank() < n) return false;
      return ok(lu.solve(r));
    }
    for (Index i = start; i < m; ++i) {
      pick[static_cast<size_t>(pos)] = i;
      if (rec(pos + 1, i + 1)) return true;
    }
    return false;
  };
  return rec(0, 0);
}

}  // namespace oracle
