#pragma once

#include <vector>

#include "condlp/numerics.hpp"
#include "condlp/tolerances.hpp"

namespace condlp {

enum class Sense { Le, Ge, Eq };

// maximize objective . x subject to rows x (sense) rhs; each variable is either
// free or nonnegative.
struct LinearProgram {
  explicit LinearProgram(Index num_vars = 0);

  Index num_vars;
  std::vector<bool> nonneg;
  std::vector<Vector> rows;
  std::vector<Sense> senses;
  std::vector<double> rhs;
  Vector objective;

  void add(const Vector& row, Sense sense, double value);
  void set_nonneg(Index j, bool flag = true);
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  Vector x;
  double objective = 0.0;
  long iterations = 0;
};

// Dense two-phase simplex with Bland's rule. Rows are equilibrated before
// solving so the tolerances are relative to the row scale.
LpSolution solve_lp(const LinearProgram& lp, const Tolerances& tol = {});

struct LpFeasibility {
  bool feasible = false;
  Vector witness;
};

LpFeasibility lp_feasible(const LinearProgram& lp, const Tolerances& tol = {});

}  // namespace condlp
