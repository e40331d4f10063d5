#pragma once

#include <optional>
#include <vector>

#include "condlp/conic.hpp"
#include "condlp/rho_primal.hpp"

namespace condlp {

enum class Membership { Inside, Outside, Boundary };

struct K1Interval {
  double lower = 0.0;
  double upper = 0.0;
  bool inside = false;
  bool certified = true;  // false for the sampling bound above dimension 4
};

// Change of variables z = mean of the rows, x_i = a_i - z.
struct DualDecomposition {
  Vector z;
  std::vector<Vector> xs;
  Vector c;
  std::optional<K1Interval> k1;
  double k2 = 0.0;            // |c|
  double max_row_norm = 0.0;  // max_i |a_i|
};

DualDecomposition decompose(const Matrix& rows, const Vector& c);

Membership membership(const DualDecomposition& d, const Tolerances& tol = {});

K1Interval compute_k1(const DualDecomposition& d, const Tolerances& tol = {},
                      int sampling_directions = 10000,
                      std::uint64_t seed = kDefaultProbeSeed);

// 1 / max{8/k1, 4/k2, 24 max|a_i| / (k1 k2)}
double dual_geometry_bound(double k1, double k2, double max_row_norm);

// Uses d.k1 when present, otherwise computes it.
RhoInterval dual_rho_lower_bound(const DualDecomposition& d, const Tolerances& tol = {});

struct PerturbationRadii {
  double dx_max = 0.0;
  double dz_max = 0.0;
  double dc_max = 0.0;
};

PerturbationRadii perturbation_tolerance(const DualDecomposition& d, double alpha);

// Perturbations of (A, c) are measured by |dA|_F + |dc|.
struct DualPerturbation {
  Matrix dA;
  Vector dc;
  double norm() const { return dA.norm() + dc.norm(); }
};

bool dual_flips(const DualEqualityProblem& p, bool base_feasible, const DualPerturbation& d,
                const Tolerances& tol = {});

struct DualRhoInterval {
  RhoInterval rho;
  std::optional<DualPerturbation> witness;  // flip attaining rho.upper
};

DualRhoInterval dual_rho_upper_bound(const DualEqualityProblem& p, int probes, const Tolerances& tol = {},
                                     std::uint64_t seed = kDefaultProbeSeed);

OracleInterval dual_brute_force_rho(const DualEqualityProblem& p, double resolution, int samples,
                                    std::uint64_t seed = kDefaultProbeSeed, const Tolerances& tol = {});

DualRhoInterval dual_rho(const DualEqualityProblem& p, const RhoOptions& opt = {});

}  // namespace condlp
