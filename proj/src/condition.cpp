#include "condlp/condition.hpp"

#include <algorithm>
#include <cmath>

#include "condlp/errors.hpp"
#include "condlp/lp.hpp"
#include "flip_search.hpp"

namespace condlp {

namespace {

double floor1(double c) { return std::isnan(c) ? kInf : std::max(1.0, c); }

double joint_norm(const Matrix& A, const Vector& v) { return std::sqrt(A.squaredNorm() + v.squaredNorm()); }

// Form 4: {x != 0, A x <= 0} and {y >= 0, y != 0, A^T y = 0}. Both are decided by LPs
// on normalized slices.
bool form4_primal(const Matrix& A, const Tolerances& tol) {
  const Index d = A.cols();
  for (Index j = 0; j < d; ++j)
    for (double s : {1.0, -1.0}) {
      LinearProgram lp(d);
      for (Index i = 0; i < A.rows(); ++i) lp.add(A.row(i).transpose(), Sense::Le, 0.0);
      lp.add(s * Vector::Unit(d, j), Sense::Ge, 1.0);
      if (lp_feasible(lp, tol).feasible) return true;
    }
  return false;
}

bool form4_dual(const Matrix& A, const Tolerances& tol) {
  const Index n = A.rows();
  LinearProgram lp(n);
  for (Index i = 0; i < n; ++i) lp.set_nonneg(i);
  for (Index j = 0; j < A.cols(); ++j) lp.add(A.col(j), Sense::Eq, 0.0);
  lp.add(Vector::Ones(n), Sense::Eq, 1.0);
  return lp_feasible(lp, tol).feasible;
}

// Probing-only interval for form 4; the lower side of rho is left at 0.
RhoInterval form4_rho(const Matrix& A, bool dual, const RhoOptions& opt) {
  auto decide = [&](const Matrix& X) { return dual ? form4_dual(X, opt.tol) : form4_primal(X, opt.tol); };
  RhoInterval out;
  out.feasible = decide(A);
  out.certified = false;
  const double norm = A.norm();
  if (norm == 0.0) {
    out.upper = 0.0;
    out.ill_posed = true;
    return out;
  }
  const bool base = out.feasible;
  auto fs = detail::make_flip_search([&](const Matrix& D) { return decide(A + D) != base; },
                                     [](const Matrix& D) { return D.norm(); }, 10.0 * norm, 1e-7 * norm);
  RandomStream rng(opt.seed, dual ? 0xf4d0ULL : 0xf4a0ULL);
  fs.offer(-A);
  Matrix bestD;
  double bestr = kInf;
  for (int s = 0; s < opt.probes; ++s) {
    const Matrix D = rng.normal_matrix(A.rows(), A.cols());
    const double r = fs.along(D);
    if (r < bestr) {
      bestr = r;
      bestD = D;
    }
  }
  if (std::isfinite(fs.best)) {
    fs.refine(fs.best_delta, opt.probes / 2, rng);
    if (bestD.size()) fs.refine(bestD, opt.probes / 4, rng);
    out.upper = fs.best_delta.norm();
    out.witness_perturbation = fs.best_delta;
  }
  return out;
}

}  // namespace

ConditionPart condition_part(const RhoInterval& rho, double norm) {
  ConditionPart part;
  part.rho = rho;
  part.norm = norm;
  if (rho.upper == 0.0)
    part.c_lower = kInf;
  else
    part.c_lower = std::isfinite(rho.upper) ? floor1(norm / rho.upper) : 1.0;
  part.c_upper = rho.lower > 0.0 && !rho.ill_posed ? floor1(norm / rho.lower) : kInf;
  part.c_upper = std::max(part.c_upper, part.c_lower);
  return part;
}

ConditionInterval condition_interval(const CanonicalInstance& inst, const RhoOptions& opt) {
  inst.validate();
  ConditionInterval out;
  out.form = inst.form;
  const Matrix& A = inst.A;
  if (inst.form == 4) {
    out.norm_Ab = out.norm_Ac = out.norm_Abc = A.norm();
    out.primal = condition_part(form4_rho(A, false, opt), A.norm());
    out.dual = condition_part(form4_rho(A, true, opt), A.norm());
  } else {
    out.norm_Ab = joint_norm(A, inst.b);
    out.norm_Ac = joint_norm(A, inst.c);
    out.norm_Abc = std::sqrt(A.squaredNorm() + inst.b.squaredNorm() + inst.c.squaredNorm());
    if (inst.form == 3) {
      out.primal = condition_part(dual_rho(dual_equality(inst), opt).rho, out.norm_Ab);
      out.primal.equality_form = true;
    } else {
      out.primal = condition_part(primal_rho(homogenize_primal(inst), opt), out.norm_Ab);
    }
    if (inst.form == 1) {
      out.dual = condition_part(dual_rho(dual_equality(inst), opt).rho, out.norm_Ac);
      out.dual.equality_form = true;
    } else {
      out.dual = condition_part(primal_rho(homogenize_dual(inst), opt), out.norm_Ac);
    }
  }
  out.c_lower = std::max(out.primal.c_lower, out.dual.c_lower);
  out.c_upper = std::max(out.primal.c_upper, out.dual.c_upper);
  out.sum_lower = out.primal.c_lower + out.dual.c_lower;
  out.sum_upper = out.primal.c_upper + out.dual.c_upper;
  out.ill_posed = out.primal.rho.ill_posed || out.dual.rho.ill_posed;
  out.certified = inst.form != 4 && out.primal.rho.certified && out.dual.rho.certified;
  return out;
}

bool primal_feasible(const CanonicalInstance& inst, const Tolerances& tol) {
  inst.validate();
  if (inst.form == 4) return form4_primal(inst.A, tol);
  if (inst.form == 3) return is_feasible(dual_equality(inst), tol);
  return is_feasible(homogenize_primal(inst), tol).feasible;
}

bool dual_feasible(const CanonicalInstance& inst, const Tolerances& tol) {
  inst.validate();
  if (inst.form == 4) return form4_dual(inst.A, tol);
  if (inst.form == 1) return is_feasible(dual_equality(inst), tol);
  return is_feasible(homogenize_dual(inst), tol).feasible;
}

double condition_lower_from_flip(const ConicFeasibilityProblem& p, const Matrix& delta, const Tolerances& tol) {
  p.validate();
  if (delta.rows() != p.M.rows() || delta.cols() != p.M.cols()) throw InvalidInput("delta must have the shape of M");
  if (!flips(p, is_feasible(p, tol).feasible, delta, tol)) throw NotAFlip("perturbation does not change feasibility");
  return floor1(p.M.norm() / delta.norm());
}

double condition_lower_from_flip(const CanonicalInstance& inst, const Matrix& delta, const Tolerances& tol) {
  inst.validate();
  const Index n = inst.A.rows(), d = inst.A.cols();
  const bool with_b = inst.form != 4;
  if (delta.rows() != n || !(delta.cols() == d || (with_b && delta.cols() == d + 1)))
    throw InvalidInput("delta must perturb A or [A, b]");
  CanonicalInstance moved = inst;
  moved.A += delta.leftCols(d);
  if (delta.cols() == d + 1) moved.b += delta.col(d);
  if (primal_feasible(inst, tol) == primal_feasible(moved, tol))
    throw NotAFlip("perturbation does not change primal feasibility");
  const double norm = with_b ? joint_norm(inst.A, inst.b) : inst.A.norm();
  return floor1(norm / delta.norm());
}

}  // namespace condlp
