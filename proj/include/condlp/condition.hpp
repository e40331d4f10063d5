#pragma once

#include "condlp/conic.hpp"
#include "condlp/rho_dual.hpp"
#include "condlp/rho_primal.hpp"

namespace condlp {

// One side of a condition number: C = norm / rho, both ends floored at 1.
struct ConditionPart {
  RhoInterval rho;
  double norm = 0.0;
  double c_lower = 1.0;
  double c_upper = kInf;
  bool equality_form = false;  // rho measured in |dA|_F + |dc| instead of the conic Frobenius metric
};

struct ConditionInterval {
  int form = 1;
  double c_lower = 1.0;  // max of the parts
  double c_upper = kInf;
  double sum_lower = 2.0;  // C_P + C_D
  double sum_upper = kInf;
  ConditionPart primal;
  ConditionPart dual;
  double norm_Ab = 0.0;
  double norm_Ac = 0.0;
  double norm_Abc = 0.0;
  bool certified = true;
  bool ill_posed = false;
};

ConditionPart condition_part(const RhoInterval& rho, double norm);

ConditionInterval condition_interval(const CanonicalInstance& inst, const RhoOptions& opt = {});

// Primal feasibility of a canonical instance (form 4: some x != 0 with Ax <= 0).
bool primal_feasible(const CanonicalInstance& inst, const Tolerances& tol = {});
// Dual feasibility (form 4: some y >= 0, y != 0 with A^T y = 0).
bool dual_feasible(const CanonicalInstance& inst, const Tolerances& tol = {});

// |M|_F / |delta|_F for a verified flip, floored at 1. Throws NotAFlip otherwise.
double condition_lower_from_flip(const ConicFeasibilityProblem& p, const Matrix& delta, const Tolerances& tol = {});

// delta perturbs A (n x d) or [A, b] (n x (d+1)) of the primal program.
double condition_lower_from_flip(const CanonicalInstance& inst, const Matrix& delta, const Tolerances& tol = {});

}  // namespace condlp
