#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "condlp/conic.hpp"
#include "condlp/tolerances.hpp"

namespace condlp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct RhoInterval {
  bool feasible = false;
  double lower = 0.0;
  double upper = kInf;
  std::optional<Vector> witness_direction;
  // If present, M + witness_perturbation has the opposite feasibility and
  // its Frobenius norm equals `upper`.
  std::optional<Matrix> witness_perturbation;
  bool ill_posed = false;
  bool certified = true;  // false when a kernel stalled or a bound is heuristic
};

struct CriticalSplit {
  std::vector<Index> order;
  Index critical_index = -1;  // row index (in the original numbering)
  Index prefix_length = 0;
  double alpha = 0.0;
  double beta = 0.0;
  double critical_norm = 0.0;
  double bound = 0.0;
};

inline constexpr std::uint64_t kDefaultProbeSeed = 0x5eed0001ULL;

double rho_ray(const Vector& a, const Vector& p);

// min{alpha/2, alpha beta / (4 alpha + 2 |a|)}
double transition_bound(double alpha, double beta, double critical_norm);

RhoInterval rho_single(const Vector& a, const ConeDescriptor& cone, const Tolerances& tol = {});

// Exact value for a ray cone: min_i <a_i, p> when feasible, |(Mp)_-| otherwise.
RhoInterval rho_ray_cone(const ConicFeasibilityProblem& p, const Tolerances& tol = {});

RhoInterval feasible_lower_bound(const ConicFeasibilityProblem& p, const Tolerances& tol = {});

// Upper bound min_i rho(a_i, C cap_{j != i} pos(a_j)) for a feasible system.
RhoInterval feasible_helly_upper(const ConicFeasibilityProblem& p, const Tolerances& tol = {});

struct InfeasibleLowerBound {
  RhoInterval interval;
  CriticalSplit split;  // the ordering achieving the bound
};

InfeasibleLowerBound infeasible_lower_bound(const ConicFeasibilityProblem& p, int orders,
                                            const Tolerances& tol = {},
                                            std::uint64_t seed = kDefaultProbeSeed);

// Smallest positive s on a doubling grid then bisection at which M + s D changes feasibility.
// Returns +inf when no flip is seen up to cap. *flip receives the verified perturbation.
double flip_radius_along(const ConicFeasibilityProblem& p, bool base_feasible, const Matrix& D,
                         double cap, double resolution, const Tolerances& tol, Matrix* flip);

bool flips(const ConicFeasibilityProblem& p, bool base_feasible, const Matrix& delta,
           const Tolerances& tol);

RhoInterval rho_upper_bound(const ConicFeasibilityProblem& p, int probes, const Tolerances& tol = {},
                            std::uint64_t seed = kDefaultProbeSeed);

struct OracleInterval {
  double lower = 0.0;
  double upper = kInf;
};

OracleInterval brute_force_rho(const ConicFeasibilityProblem& p, double resolution, int samples,
                               std::uint64_t seed = kDefaultProbeSeed, const Tolerances& tol = {});

struct RhoOptions {
  int orders = 8;
  int probes = 64;
  int k1_samples = 10000;  // directions for the inside distance above dimension 4
  std::uint64_t seed = kDefaultProbeSeed;
  Tolerances tol;
};

// Full interval: certified lower side plus analytic and probed upper sides.
RhoInterval primal_rho(const ConicFeasibilityProblem& p, const RhoOptions& opt = {});

}  // namespace condlp
