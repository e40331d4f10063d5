#include "condlp/lp.hpp"

#include <cmath>
#include <limits>

namespace condlp {

LinearProgram::LinearProgram(Index n)
    : num_vars(n), nonneg(static_cast<size_t>(n), false), objective(Vector::Zero(n)) {}

void LinearProgram::add(const Vector& row, Sense sense, double value) {
  if (row.size() != num_vars) throw InvalidInput("LP row has wrong length");
  rows.push_back(row);
  senses.push_back(sense);
  rhs.push_back(value);
}

void LinearProgram::set_nonneg(Index j, bool flag) { nonneg.at(static_cast<size_t>(j)) = flag; }

namespace {

constexpr double kPivotTol = 1e-10;

struct Tableau {
  Matrix T;  // m rows of constraints, last column is rhs
  std::vector<Index> basis;
  std::vector<bool> banned;
  long iterations = 0;

  Index m() const { return T.rows(); }
  Index ncols() const { return T.cols() - 1; }

  void pivot(Index r, Index c) {
    const double p = T(r, c);
    T.row(r) /= p;
    for (Index i = 0; i < m(); ++i) {
      if (i == r) continue;
      const double f = T(i, c);
      if (f != 0.0) T.row(i) -= f * T.row(r);
    }
    T(r, c) = 1.0;
    basis[static_cast<size_t>(r)] = c;
  }

  // maximize cost . x over the current tableau; returns false if unbounded
  bool optimize(const Vector& cost, long max_iters) {
    const double rc_tol = 1e-11 * std::max(1.0, cost.cwiseAbs().maxCoeff());
    while (true) {
      if (iterations >= max_iters)
        throw SolverNonconvergence("simplex exceeded iteration cap");
      Index enter = -1;
      for (Index j = 0; j < ncols() && enter < 0; ++j) {
        if (banned[static_cast<size_t>(j)]) continue;
        double r = cost(j);
        for (Index i = 0; i < m(); ++i) r -= cost(basis[static_cast<size_t>(i)]) * T(i, j);
        if (r > rc_tol) enter = j;
      }
      if (enter < 0) return true;
      Index leave = -1;
      double best = std::numeric_limits<double>::infinity();
      for (Index i = 0; i < m(); ++i) {
        const double a = T(i, enter);
        if (a <= kPivotTol) continue;
        const double ratio = std::max(T(i, ncols()), 0.0) / a;
        if (leave < 0 || ratio < best - 1e-14) {
          best = ratio;
          leave = i;
        } else if (ratio <= best + 1e-14 &&
                   basis[static_cast<size_t>(i)] < basis[static_cast<size_t>(leave)]) {
          leave = i;
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter);
      ++iterations;
    }
  }
};

}  // namespace

LpSolution solve_lp(const LinearProgram& lp, const Tolerances& tol) {
  const Index n = lp.num_vars;
  if (lp.objective.size() != n) throw InvalidInput("LP objective has wrong length");
  // structural columns: x_j = col_pos - col_neg
  std::vector<Index> col_pos(static_cast<size_t>(n)), col_neg(static_cast<size_t>(n), -1);
  Index ns = 0;
  for (Index j = 0; j < n; ++j) {
    col_pos[static_cast<size_t>(j)] = ns++;
    if (!lp.nonneg[static_cast<size_t>(j)]) col_neg[static_cast<size_t>(j)] = ns++;
  }

  struct Row {
    Vector a;
    Sense s;
    double b;
  };
  std::vector<Row> rows;
  LpSolution out;
  for (size_t i = 0; i < lp.rows.size(); ++i) {
    const Vector& r = lp.rows[i];
    if (!r.allFinite() || !std::isfinite(lp.rhs[i])) throw InvalidInput("LP data not finite");
    Vector a = Vector::Zero(ns);
    for (Index j = 0; j < n; ++j) {
      a(col_pos[static_cast<size_t>(j)]) = r(j);
      if (col_neg[static_cast<size_t>(j)] >= 0) a(col_neg[static_cast<size_t>(j)]) = -r(j);
    }
    double b = lp.rhs[i];
    Sense s = lp.senses[i];
    const double scale = a.size() ? a.cwiseAbs().maxCoeff() : 0.0;
    if (scale == 0.0) {
      const bool ok = (s == Sense::Le && b >= -tol.feas_tol) ||
                      (s == Sense::Ge && b <= tol.feas_tol) ||
                      (s == Sense::Eq && std::abs(b) <= tol.feas_tol);
      if (!ok) {
        out.status = LpStatus::Infeasible;
        return out;
      }
      continue;
    }
    a /= scale;
    b /= scale;
    if (b < 0) {
      a = -a;
      b = -b;
      if (s == Sense::Le)
        s = Sense::Ge;
      else if (s == Sense::Ge)
        s = Sense::Le;
    }
    rows.push_back({a, s, b});
  }

  const Index m = static_cast<Index>(rows.size());
  Index nslack = 0, nart = 0;
  for (const auto& r : rows) {
    if (r.s != Sense::Eq) ++nslack;
    if (r.s != Sense::Le) ++nart;
  }
  const Index ncols = ns + nslack + nart;
  Tableau tab;
  tab.T = Matrix::Zero(m, ncols + 1);
  tab.basis.assign(static_cast<size_t>(m), -1);
  tab.banned.assign(static_cast<size_t>(ncols), false);
  Index next_slack = ns, next_art = ns + nslack;
  double rhs_scale = 1.0;
  for (Index i = 0; i < m; ++i) {
    const Row& r = rows[static_cast<size_t>(i)];
    tab.T.row(i).head(ns) = r.a.transpose();
    tab.T(i, ncols) = r.b;
    rhs_scale = std::max(rhs_scale, r.b);
    if (r.s == Sense::Le) {
      tab.T(i, next_slack) = 1.0;
      tab.basis[static_cast<size_t>(i)] = next_slack++;
    } else {
      if (r.s == Sense::Ge) tab.T(i, next_slack++) = -1.0;
      tab.T(i, next_art) = 1.0;
      tab.basis[static_cast<size_t>(i)] = next_art++;
    }
  }

  if (nart > 0) {
    Vector cost1 = Vector::Zero(ncols);
    cost1.tail(nart).setConstant(-1.0);
    tab.optimize(cost1, tol.max_iters);
    double infeas = 0.0;
    for (Index i = 0; i < tab.m(); ++i)
      if (tab.basis[static_cast<size_t>(i)] >= ns + nslack) infeas += tab.T(i, ncols);
    if (infeas > tol.feas_tol * rhs_scale) {
      out.status = LpStatus::Infeasible;
      out.iterations = tab.iterations;
      return out;
    }
    for (Index j = ns + nslack; j < ncols; ++j) tab.banned[static_cast<size_t>(j)] = true;
    // drive remaining (zero-valued) artificials out of the basis
    std::vector<Index> keep;
    for (Index i = 0; i < tab.m(); ++i) {
      if (tab.basis[static_cast<size_t>(i)] < ns + nslack) {
        keep.push_back(i);
        continue;
      }
      Index c = -1;
      double best = kPivotTol;
      for (Index j = 0; j < ns + nslack; ++j)
        if (std::abs(tab.T(i, j)) > best) {
          best = std::abs(tab.T(i, j));
          c = j;
        }
      if (c >= 0) {
        tab.pivot(i, c);
        keep.push_back(i);
      }
      // otherwise the row is redundant and is dropped
    }
    if (static_cast<Index>(keep.size()) < tab.m()) {
      Matrix T2(static_cast<Index>(keep.size()), tab.T.cols());
      std::vector<Index> b2;
      for (size_t k = 0; k < keep.size(); ++k) {
        T2.row(static_cast<Index>(k)) = tab.T.row(keep[k]);
        b2.push_back(tab.basis[static_cast<size_t>(keep[k])]);
      }
      tab.T = T2;
      tab.basis = b2;
    }
  }

  Vector cost2 = Vector::Zero(ncols);
  for (Index j = 0; j < n; ++j) {
    cost2(col_pos[static_cast<size_t>(j)]) = lp.objective(j);
    if (col_neg[static_cast<size_t>(j)] >= 0) cost2(col_neg[static_cast<size_t>(j)]) = -lp.objective(j);
  }
  const bool bounded = tab.optimize(cost2, tol.max_iters);
  out.iterations = tab.iterations;
  Vector xs = Vector::Zero(ncols);
  for (Index i = 0; i < tab.m(); ++i) xs(tab.basis[static_cast<size_t>(i)]) = tab.T(i, ncols);
  out.x = Vector::Zero(n);
  for (Index j = 0; j < n; ++j) {
    out.x(j) = xs(col_pos[static_cast<size_t>(j)]);
    if (col_neg[static_cast<size_t>(j)] >= 0) out.x(j) -= xs(col_neg[static_cast<size_t>(j)]);
  }
  out.objective = lp.objective.dot(out.x);
  out.status = bounded ? LpStatus::Optimal : LpStatus::Unbounded;
  return out;
}

LpFeasibility lp_feasible(const LinearProgram& lp, const Tolerances& tol) {
  LinearProgram copy = lp;
  copy.objective = Vector::Zero(lp.num_vars);
  const LpSolution s = solve_lp(copy, tol);
  LpFeasibility f;
  f.feasible = s.status != LpStatus::Infeasible;
  if (f.feasible) f.witness = s.x;
  return f;
}

}  // namespace condlp
