#pragma once

#include <variant>
#include <vector>

#include "condlp/numerics.hpp"
#include "condlp/tolerances.hpp"

namespace condlp {

// Forms: 1 = {Ax <= b}, 2 = {Ax <= b, x >= 0}, 3 = {Ax = b, x >= 0},
// 4 = {Ax <= b, x >= 0} as a general-position conic family (probing only).
struct CanonicalInstance {
  int form = 1;
  Matrix A;  // n x d
  Vector b;  // n
  Vector c;  // d

  Index n() const { return A.rows(); }
  Index d() const { return A.cols(); }
  void validate() const;
};

// Orthant-type cone: coordinates in `strict` must be > 0, coordinates in
// `nonneg` must be >= 0, the rest are free. `strict` is nonempty.
struct OrthantCone {
  Index dim = 0;
  std::vector<Index> strict;
  std::vector<Index> nonneg;
};

// Open ray {t * direction : t > 0}.
struct RayCone {
  Vector direction;
};

class ConeDescriptor {
 public:
  static ConeDescriptor orthant(Index dim, std::vector<Index> strict, std::vector<Index> nonneg = {});
  static ConeDescriptor ray(const Vector& direction);

  bool is_orthant() const { return std::holds_alternative<OrthantCone>(cone_); }
  bool is_ray() const { return std::holds_alternative<RayCone>(cone_); }
  const OrthantCone& as_orthant() const { return std::get<OrthantCone>(cone_); }
  const RayCone& as_ray() const { return std::get<RayCone>(cone_); }
  Index dim() const;

  // Indices whose sign is constrained (strict followed by nonneg).
  std::vector<Index> signed_coordinates() const;
  // Vector t with <t, p> < 0 for every p in the cone.
  Vector separator() const;
  bool in_closure(const Vector& p, double tol) const;
  bool contains(const Vector& p, double tol) const;
  // Euclidean projection onto the closure (orthant only).
  Vector project_closure(const Vector& p) const;

 private:
  std::variant<OrthantCone, RayCone> cone_;
};

// Feasibility of {M p >= 0, p in C}; rows of M are the a_i.
struct ConicFeasibilityProblem {
  Matrix M;
  ConeDescriptor cone = ConeDescriptor::orthant(1, {0});

  void validate() const;
};

// Feasibility of {A^T y = c, y >= 0}.
struct DualEqualityProblem {
  Matrix A;  // n x d, rows a_i
  Vector c;  // d
};

ConicFeasibilityProblem homogenize_primal(const CanonicalInstance& inst);
ConicFeasibilityProblem homogenize_dual(const CanonicalInstance& inst);
// The equality-form program of an instance: the dual of form 1, the primal of form 3.
DualEqualityProblem dual_equality(const CanonicalInstance& inst);
// form 3 primal {A x = b, x >= 0} as an equality problem on (A^T, b)
DualEqualityProblem primal_equality(const CanonicalInstance& inst);
bool primal_is_conic(int form);
bool dual_is_conic(int form);

struct FeasibilityResult {
  bool feasible = false;
  // Orthant: optimum of max t s.t. Mp >= 0, p_j >= t (j strict), p pinned on
  // the first strict coordinate. Ray: min_i <a_i, direction>.
  double margin = 0.0;
  Vector witness;  // point of the cone satisfying Mp >= 0 when feasible
};

FeasibilityResult is_feasible(const ConicFeasibilityProblem& prob, const Tolerances& tol = {});
bool is_feasible(const DualEqualityProblem& prob, const Tolerances& tol = {});

}  // namespace condlp
