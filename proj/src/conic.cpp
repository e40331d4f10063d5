#include "condlp/conic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "condlp/lp.hpp"

namespace condlp {

void CanonicalInstance::validate() const {
  if (form < 1 || form > 4) throw InvalidInput("form must be 1, 2, 3 or 4");
  if (A.rows() < 1 || A.cols() < 1) throw InvalidInput("A must be at least 1x1");
  require_finite(A, "A");
  if (form == 4) return;
  if (b.size() != A.rows()) throw InvalidInput("b must have one entry per row of A");
  if (c.size() != A.cols()) throw InvalidInput("c must have one entry per column of A");
  require_finite(b, "b");
  require_finite(c, "c");
}

ConeDescriptor ConeDescriptor::orthant(Index dim, std::vector<Index> strict, std::vector<Index> nonneg) {
  if (dim < 1) throw InvalidInput("cone dimension must be positive");
  if (strict.empty()) throw InvalidInput("orthant cone needs a nonempty strict set");
  std::set<Index> seen;
  for (Index j : strict) {
    if (j < 0 || j >= dim) throw InvalidInput("strict index out of range");
    if (!seen.insert(j).second) throw InvalidInput("duplicate strict index");
  }
  for (Index j : nonneg) {
    if (j < 0 || j >= dim) throw InvalidInput("nonneg index out of range");
    if (!seen.insert(j).second) throw InvalidInput("strict and nonneg sets must be disjoint");
  }
  ConeDescriptor cd;
  cd.cone_ = OrthantCone{dim, std::move(strict), std::move(nonneg)};
  return cd;
}

ConeDescriptor ConeDescriptor::ray(const Vector& direction) {
  require_finite(direction, "ray direction");
  const double n = direction.norm();
  if (direction.size() < 1 || std::abs(n - 1.0) > 1e-9)
    throw InvalidInput("ray direction must have unit norm");
  ConeDescriptor cd;
  cd.cone_ = RayCone{direction};
  return cd;
}

Index ConeDescriptor::dim() const {
  return is_orthant() ? as_orthant().dim : as_ray().direction.size();
}

std::vector<Index> ConeDescriptor::signed_coordinates() const {
  const auto& o = as_orthant();
  std::vector<Index> out = o.strict;
  out.insert(out.end(), o.nonneg.begin(), o.nonneg.end());
  return out;
}

Vector ConeDescriptor::separator() const {
  if (is_ray()) return -as_ray().direction;
  Vector t = Vector::Zero(dim());
  t(as_orthant().strict.front()) = -1.0;
  return t;
}

bool ConeDescriptor::in_closure(const Vector& p, double tol) const {
  if (p.size() != dim()) return false;
  if (is_ray()) {
    const Vector& r = as_ray().direction;
    const double s = r.dot(p);
    return s >= -tol && (p - s * r).norm() <= tol;
  }
  for (Index j : signed_coordinates())
    if (p(j) < -tol) return false;
  return true;
}

bool ConeDescriptor::contains(const Vector& p, double tol) const {
  if (!in_closure(p, tol)) return false;
  if (is_ray()) return as_ray().direction.dot(p) > tol;
  for (Index j : as_orthant().strict)
    if (p(j) <= tol) return false;
  return true;
}

Vector ConeDescriptor::project_closure(const Vector& p) const {
  Vector q = p;
  if (is_ray()) {
    const Vector& r = as_ray().direction;
    return std::max(0.0, r.dot(p)) * r;
  }
  for (Index j : signed_coordinates()) q(j) = std::max(q(j), 0.0);
  return q;
}

void ConicFeasibilityProblem::validate() const {
  if (M.rows() < 1 || M.cols() < 1) throw InvalidInput("constraint matrix must be nonempty");
  require_finite(M, "constraint matrix");
  if (cone.dim() != M.cols()) throw InvalidInput("cone dimension must equal the number of columns");
}

namespace {

std::vector<Index> range(Index n) {
  std::vector<Index> r(static_cast<size_t>(n));
  for (Index i = 0; i < n; ++i) r[static_cast<size_t>(i)] = i;
  return r;
}

}  // namespace

bool primal_is_conic(int form) { return form == 1 || form == 2; }
bool dual_is_conic(int form) { return form == 2 || form == 3; }

ConicFeasibilityProblem homogenize_primal(const CanonicalInstance& inst) {
  inst.validate();
  if (!primal_is_conic(inst.form)) throw InvalidInput("homogenize_primal needs form 1 or 2");
  const Index n = inst.n(), d = inst.d();
  ConicFeasibilityProblem p;
  p.M.resize(n, d + 1);
  p.M.leftCols(d) = -inst.A;
  p.M.col(d) = inst.b;
  p.cone = ConeDescriptor::orthant(d + 1, {d}, inst.form == 2 ? range(d) : std::vector<Index>{});
  return p;
}

ConicFeasibilityProblem homogenize_dual(const CanonicalInstance& inst) {
  inst.validate();
  if (!dual_is_conic(inst.form)) throw InvalidInput("homogenize_dual needs form 2 or 3");
  const Index n = inst.n(), d = inst.d();
  ConicFeasibilityProblem p;
  p.M.resize(d, n + 1);
  p.M.leftCols(n) = -inst.A.transpose();
  p.M.col(n) = inst.c;
  p.cone = ConeDescriptor::orthant(n + 1, {n}, inst.form == 2 ? range(n) : std::vector<Index>{});
  return p;
}

DualEqualityProblem dual_equality(const CanonicalInstance& inst) {
  inst.validate();
  if (inst.form == 1) return {inst.A, inst.c};
  if (inst.form == 3) return primal_equality(inst);
  throw InvalidInput("dual_equality needs form 1 or 3");
}

DualEqualityProblem primal_equality(const CanonicalInstance& inst) {
  inst.validate();
  if (inst.form != 3) throw InvalidInput("primal_equality needs form 3");
  return {inst.A.transpose(), inst.b};
}

FeasibilityResult is_feasible(const ConicFeasibilityProblem& prob, const Tolerances& tol) {
  prob.validate();
  FeasibilityResult res;
  const Index m = prob.M.rows(), k = prob.M.cols();
  if (prob.cone.is_ray()) {
    const Vector& r = prob.cone.as_ray().direction;
    const Vector s = prob.M * r;
    res.margin = s.minCoeff();
    res.feasible = res.margin >= 0.0;
    if (res.feasible) res.witness = r;
    return res;
  }
  const OrthantCone& o = prob.cone.as_orthant();
  LinearProgram lp(k + 1);  // variables p (k), t
  for (Index j : o.nonneg) lp.set_nonneg(j);
  for (Index i = 0; i < m; ++i) {
    Vector row = Vector::Zero(k + 1);
    row.head(k) = prob.M.row(i).transpose();
    lp.add(row, Sense::Ge, 0.0);
  }
  for (Index j : o.strict) {
    Vector row = Vector::Zero(k + 1);
    row(j) = 1.0;
    row(k) = -1.0;
    lp.add(row, Sense::Ge, 0.0);
  }
  Vector pin = Vector::Zero(k + 1);
  pin(o.strict.front()) = 1.0;
  lp.add(pin, Sense::Eq, 1.0);
  lp.objective(k) = 1.0;
  const LpSolution s = solve_lp(lp, tol);
  if (s.status == LpStatus::Infeasible) {
    res.margin = -std::numeric_limits<double>::infinity();
    return res;
  }
  res.margin = s.x(k);
  res.feasible = res.margin > tol.feas_tol;
  if (res.feasible) {
    Vector p = s.x.head(k);
    // clean round-off on sign-constrained coordinates
    for (Index j : o.nonneg) p(j) = std::max(p(j), 0.0);
    res.witness = p / p.norm();
  }
  return res;
}

bool is_feasible(const DualEqualityProblem& prob, const Tolerances& tol) {
  const Index n = prob.A.rows(), d = prob.A.cols();
  if (prob.c.size() != d) throw InvalidInput("c must have one entry per column of A");
  LinearProgram lp(n);
  for (Index i = 0; i < n; ++i) lp.set_nonneg(i);
  for (Index j = 0; j < d; ++j) lp.add(prob.A.col(j), Sense::Eq, prob.c(j));
  return lp_feasible(lp, tol).feasible;
}

}  // namespace condlp
