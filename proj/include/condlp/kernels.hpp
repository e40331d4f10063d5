#pragma once

#include <vector>

#include "condlp/conic.hpp"
#include "condlp/numerics.hpp"
#include "condlp/tolerances.hpp"

namespace condlp {

// Lawson-Hanson: argmin_{w >= 0} ||E w - f||.
Vector nnls(const Matrix& E, const Vector& f, long max_iters = 0);

struct MaxMinResult {
  double value = 0.0;  // min_i <m_i, witness>, recomputed from the witness
  Vector witness;      // unit vector in the closed cone
  double upper = 0.0;  // certified upper bound on the max over cone and unit ball
  Vector dual;         // simplex weights attaining `upper`
  bool converged = false;
};

// max over p in cl(cone), ||p|| <= 1, of min_i <m_i, p>. Rows of M are the m_i.
MaxMinResult maxmin_direction(const Matrix& M, const ConeDescriptor& cone, const Tolerances& tol = {});

struct LinearMaxResult {
  double value_lower = 0.0;
  double value_upper = 0.0;
  Vector witness;  // unit vector in the region attaining value_lower
  bool certified = true;
};

// Bracket for max <a, p> over unit p in cl(cone) with <r_j, p> >= 0 for the extra rows.
LinearMaxResult max_linear_over_cone(const Vector& a, const Matrix& extra_rows,
                                     const ConeDescriptor& cone, const Tolerances& tol = {});

struct DistanceResult {
  double distance_upper = 0.0;
  double distance_lower = 0.0;
  double lambda = 0.0;
  Vector gamma;
  Vector nearest;  // lambda * ray_dir - sum gamma_i points_i
  double gap = 0.0;
  bool converged = false;
};

// Distance from z to ray(ray_dir) - hull(points) by away-step Frank-Wolfe.
DistanceResult frank_wolfe_distance(const Vector& z, const Vector& ray_dir,
                                    const std::vector<Vector>& points, const Tolerances& tol = {});

}  // namespace condlp
