#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "condlp/condition.hpp"

namespace condlp {

enum class PerturbationKind { Gaussian, ZeroPreserving, Relative };

struct PerturbationModel {
  PerturbationKind kind = PerturbationKind::Gaussian;
  double sigma = 0.1;
};

std::string to_string(PerturbationKind k);
PerturbationKind parse_perturbation_kind(const std::string& s);

Matrix perturb(const Matrix& center, const PerturbationModel& model, RandomStream& rng);
Vector perturb(const Vector& center, const PerturbationModel& model, RandomStream& rng);
CanonicalInstance perturb(const CanonicalInstance& center, const PerturbationModel& model, RandomStream& rng);

struct TrialRecord {
  Index trial = 0;
  std::uint64_t seed = 0;
  bool feasible = false;
  double rho_lower = 0.0;
  double rho_upper = 0.0;
  double c_lower = 0.0;
  double c_upper = 0.0;
  std::vector<double> values;  // experiment-specific raw values, enough to recompute aggregates
};

struct RunOptions {
  std::uint64_t seed = 1;
  int jobs = 1;
  bool timing = true;
  RhoOptions rho;
};

std::uint64_t trial_seed(std::uint64_t master, Index trial);

struct ExperimentReport {
  std::string name;
  nlohmann::ordered_json config;
  std::vector<TrialRecord> trials;
  nlohmann::ordered_json aggregates;
  nlohmann::ordered_json checks;  // name -> bool
  double wall_seconds = 0.0;
  bool timing = true;

  bool passed() const;
  nlohmann::ordered_json to_json() const;
  std::string to_csv() const;
};

// Recomputes aggregates and checks from config and trial records alone.
void aggregate(ExperimentReport& report);

// Threshold of the smoothed tail bound for C at failure probability delta.
double smoothed_tail_threshold(Index n, Index d, double sigma, double delta);
// 15 + 4.5 log2(nd / sigma)
double smoothed_log_bound(Index n, Index d, double sigma);
// 4 eps d^(1/4) / sigma
double boundary_bound(Index d, double sigma, double eps);

ExperimentReport run_tail_experiment(const CanonicalInstance& base, const PerturbationModel& model, Index trials,
                                     const std::vector<double>& deltas, const RunOptions& run = {});

ExperimentReport run_expectation_experiment(const CanonicalInstance& base, const PerturbationModel& model,
                                            Index trials, const RunOptions& run = {});

enum class Body { Ball, Halfspace, Cube };
std::string to_string(Body b);
Body parse_body(const std::string& s);

// Ball: unit ball. Halfspace: {x_1 <= 0}. Cube: [-1, 1]^d.
ExperimentReport run_boundary_experiment(Body body, Index d, double sigma, double eps, const Vector& center,
                                         Index trials, const RunOptions& run = {});

ExperimentReport run_independence_check(const std::vector<Vector>& centers, double sigma, Index trials,
                                        const RunOptions& run = {});

ExperimentReport run_wide_one_check(const ConeDescriptor& cone, const Vector& center, double sigma, double eps,
                                    Index trials, const RunOptions& run = {});

struct CounterexampleParameters {
  double eps = 0.0;
  double sigma = 0.0;
  double delta = 0.0;
  double flip_norm = 0.0;       // ((eps + delta) / (1 - delta))^(n - 2)
  double center_norm = 0.0;     // |A-bar|_F
  double guide_condition = 0.0; // center_norm / flip_norm
};

CounterexampleParameters counterexample_parameters(Index n);
Matrix counterexample_center(Index n);
Matrix counterexample_flip(Index n);

ExperimentReport run_counterexample(Index n, Index trials, const RunOptions& run = {});

// Monte Carlo checks of the Gaussian tail facts: Pr[|x|^2 >= c d sigma^2] and Pr[|x| <= eps].
ExperimentReport run_gaussian_tail_check(Index d, double c, Index trials, const RunOptions& run = {});
ExperimentReport run_small_ball_check(Index d, double eps_over_sigma, Index trials, const RunOptions& run = {});

}  // namespace condlp
