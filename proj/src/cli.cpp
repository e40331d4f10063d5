#include "condlp/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <iostream>
#include <optional>

#include "condlp/errors.hpp"
#include "condlp/experiments.hpp"
#include "condlp/io.hpp"

namespace condlp {

using nlohmann::ordered_json;

namespace {

const std::vector<std::string> kExperiments = {"tail",           "expectation", "boundary",  "independence",
                                               "wide-one",       "counterexample", "gaussian-tail", "small-ball"};

struct CliConfig {
  std::string command;
  std::string experiment;
  std::string input;
  std::optional<int> form;
  std::optional<double> sigma;
  std::optional<long> trials;
  std::uint64_t seed = 1;
  std::vector<double> deltas;
  double tol_feas = Tolerances{}.feas_tol;
  double tol_opt = Tolerances{}.opt_tol;
  std::string out;
  std::string csv;
  std::optional<long> n;
  std::optional<long> d;
  std::string model = "gaussian";
  int jobs = 1;
  bool no_timing = false;
  int probes = RhoOptions{}.probes;
  int orders = RhoOptions{}.orders;
  double eps = 0.01;
  std::string body = "ball";
  std::vector<double> center;
  std::vector<long> strict;
  std::vector<double> c_values;
  std::vector<double> ratios;
  double resolution = 1e-2;
  int samples = 200;
};

ordered_json echo(const CliConfig& c) {
  auto opt = [](const auto& o) -> ordered_json {
    if (o) return *o;
    return nullptr;
  };
  ordered_json j;
  j["command"] = c.command;
  if (!c.experiment.empty()) j["experiment"] = c.experiment;
  j["input"] = c.input;
  j["form"] = opt(c.form);
  j["sigma"] = opt(c.sigma);
  j["trials"] = opt(c.trials);
  j["seed"] = c.seed;
  j["delta"] = c.deltas;
  j["tol_feas"] = c.tol_feas;
  j["tol_opt"] = c.tol_opt;
  j["out"] = c.out;
  j["csv"] = c.csv;
  j["n"] = opt(c.n);
  j["d"] = opt(c.d);
  j["model"] = c.model;
  j["jobs"] = c.jobs;
  j["no_timing"] = c.no_timing;
  j["probes"] = c.probes;
  j["orders"] = c.orders;
  j["eps"] = c.eps;
  j["body"] = c.body;
  j["center"] = c.center;
  j["strict"] = c.strict;
  j["c"] = c.c_values;
  j["ratio"] = c.ratios;
  j["resolution"] = c.resolution;
  j["samples"] = c.samples;
  return j;
}

RhoOptions rho_options(const CliConfig& c) {
  RhoOptions o;
  o.probes = c.probes;
  o.orders = c.orders;
  o.tol.feas_tol = c.tol_feas;
  o.tol.opt_tol = c.tol_opt;
  return o;
}

void emit(const CliConfig& c, const ordered_json& j, const std::string& summary, std::ostream& out,
          std::ostream& err) {
  if (c.out.empty()) {
    out << j.dump(2) << "\n";
    err << summary;
  } else {
    write_text(c.out, j.dump(2) + "\n");
    out << summary;
  }
}

std::string fmt(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  std::ostringstream ss;
  ss.precision(6);
  ss << x;
  return ss.str();
}

CanonicalInstance input_instance(const CliConfig& c) {
  if (c.input.empty()) throw InvalidInput("--input is required");
  CanonicalInstance inst = load_instance(c.input);
  if (c.form) {
    inst.form = *c.form;
    inst.validate();
  }
  return inst;
}

int cmd_condition(const CliConfig& c, std::ostream& out, std::ostream& err) {
  const CanonicalInstance inst = input_instance(c);
  RhoOptions o = rho_options(c);
  o.seed = c.seed;
  const ConditionInterval ci = condition_interval(inst, o);
  ordered_json j;
  j["config"] = echo(c);
  j["condition"] = to_json(ci);
  std::ostringstream s;
  s << "form " << ci.form << ": C in [" << fmt(ci.c_lower) << ", " << fmt(ci.c_upper) << "]"
    << (ci.certified ? "" : " (not certified)") << "\n"
    << "  primal " << (ci.primal.rho.feasible ? "feasible" : "infeasible") << ", rho in [" << fmt(ci.primal.rho.lower)
    << ", " << fmt(ci.primal.rho.upper) << "]\n"
    << "  dual   " << (ci.dual.rho.feasible ? "feasible" : "infeasible") << ", rho in [" << fmt(ci.dual.rho.lower)
    << ", " << fmt(ci.dual.rho.upper) << "]\n";
  emit(c, j, s.str(), out, err);
  return 0;
}

int cmd_oracle(const CliConfig& c, std::ostream& out, std::ostream& err) {
  const CanonicalInstance inst = input_instance(c);
  if (inst.form == 4) throw InvalidInput("oracle supports forms 1, 2 and 3");
  if (c.samples < 1) throw InvalidInput("--samples must be positive");
  RhoOptions o = rho_options(c);
  o.seed = c.seed;
  const Tolerances& tol = o.tol;
  // Caps are enforced by the oracles themselves (at most 4 rows, 3 columns after reformulation).
  OracleInterval primal, dual;
  if (inst.form == 3)
    primal = dual_brute_force_rho(dual_equality(inst), c.resolution, c.samples, c.seed, tol);
  else
    primal = brute_force_rho(homogenize_primal(inst), c.resolution, c.samples, c.seed, tol);
  if (inst.form == 1)
    dual = dual_brute_force_rho(dual_equality(inst), c.resolution, c.samples, c.seed, tol);
  else
    dual = brute_force_rho(homogenize_dual(inst), c.resolution, c.samples, c.seed, tol);
  const ConditionInterval ci = condition_interval(inst, o);
  auto pair = [](double lo, double hi) {
    ordered_json j;
    j["lower"] = json_number(lo);
    j["upper"] = json_number(hi);
    return j;
  };
  ordered_json j;
  j["config"] = echo(c);
  j["primal"]["oracle"] = pair(primal.lower, primal.upper);
  j["primal"]["library"] = pair(ci.primal.rho.lower, ci.primal.rho.upper);
  j["dual"]["oracle"] = pair(dual.lower, dual.upper);
  j["dual"]["library"] = pair(ci.dual.rho.lower, ci.dual.rho.upper);
  std::ostringstream s;
  s << "primal rho: oracle [" << fmt(primal.lower) << ", " << fmt(primal.upper) << "], library ["
    << fmt(ci.primal.rho.lower) << ", " << fmt(ci.primal.rho.upper) << "]\n"
    << "dual rho:   oracle [" << fmt(dual.lower) << ", " << fmt(dual.upper) << "], library ["
    << fmt(ci.dual.rho.lower) << ", " << fmt(ci.dual.rho.upper) << "]\n";
  emit(c, j, s.str(), out, err);
  return 0;
}

Vector center_or_zero(const CliConfig& c, Index d) {
  if (c.center.empty()) return Vector::Zero(d);
  if (static_cast<Index>(c.center.size()) != d) throw InvalidInput("--center must have d entries");
  return Eigen::Map<const Vector>(c.center.data(), d);
}

ExperimentReport dispatch(const CliConfig& c) {
  RunOptions run;
  run.seed = c.seed;
  run.jobs = c.jobs;
  run.timing = !c.no_timing;
  run.rho = rho_options(c);
  if (c.jobs < 1) throw InvalidInput("--jobs must be positive");
  const PerturbationKind kind = parse_perturbation_kind(c.model);
  const std::string& name = c.experiment;

  if (name == "tail" || name == "expectation") {
    CanonicalInstance base;
    if (!c.input.empty()) {
      base = input_instance(c);
    } else {
      const Index n = c.n.value_or(2), d = c.d.value_or(2);
      if (n < 1 || d < 1) throw InvalidInput("--n and --d must be positive");
      base = CanonicalInstance{c.form.value_or(1), Matrix::Zero(n, d), Vector::Zero(n), Vector::Zero(d)};
    }
    const double nd = static_cast<double>(base.A.rows() * base.A.cols());
    const PerturbationModel model{kind, c.sigma.value_or(1.0 / std::sqrt(nd))};
    const Index trials = c.trials.value_or(200);
    if (name == "tail") {
      const std::vector<double> deltas = c.deltas.empty() ? std::vector<double>{0.25, 0.5} : c.deltas;
      return run_tail_experiment(base, model, trials, deltas, run);
    }
    return run_expectation_experiment(base, model, trials, run);
  }
  if (name == "boundary") {
    const Index d = c.d.value_or(2);
    return run_boundary_experiment(parse_body(c.body), d, c.sigma.value_or(0.5), c.eps, center_or_zero(c, d),
                                   c.trials.value_or(100000), run);
  }
  if (name == "independence") {
    std::vector<Vector> centers;
    if (!c.input.empty()) {
      const CanonicalInstance inst = load_instance(c.input);
      for (Index i = 0; i < inst.A.rows(); ++i) centers.push_back(inst.A.row(i).transpose());
    } else {
      const Index n = c.n.value_or(4), d = c.d.value_or(2);
      if (n < 1 || d < 1) throw InvalidInput("--n and --d must be positive");
      centers.assign(static_cast<size_t>(n), Vector::Zero(d));
    }
    return run_independence_check(centers, c.sigma.value_or(1.0), c.trials.value_or(10000), run);
  }
  if (name == "wide-one") {
    const Index d = c.d.value_or(2);
    if (d < 1) throw InvalidInput("--d must be positive");
    std::vector<Index> strict;
    for (long s : c.strict) {
      if (s < 1 || s > d) throw InvalidInput("--strict entries must lie in 1..d");
      strict.push_back(static_cast<Index>(s - 1));
    }
    if (strict.empty()) strict.push_back(d - 1);
    return run_wide_one_check(ConeDescriptor::orthant(d, strict), center_or_zero(c, d), c.sigma.value_or(1.0), c.eps,
                              c.trials.value_or(10000), run);
  }
  if (name == "counterexample") return run_counterexample(c.n.value_or(8), c.trials.value_or(200), run);
  if (name == "gaussian-tail") {
    const double cv = c.c_values.empty() ? 2.0 : c.c_values.front();
    return run_gaussian_tail_check(c.d.value_or(2), cv, c.trials.value_or(100000), run);
  }
  if (name == "small-ball") {
    const double r = c.ratios.empty() ? 0.5 : c.ratios.front();
    return run_small_ball_check(c.d.value_or(2), r, c.trials.value_or(100000), run);
  }
  throw InvalidInput("unknown experiment " + name);
}

int cmd_experiment(const CliConfig& c, std::ostream& out, std::ostream& err) {
  ExperimentReport r = dispatch(c);
  r.config["cli"] = echo(c);
  if (!c.csv.empty()) write_text(c.csv, r.to_csv());
  std::ostringstream s;
  s << r.name << ": " << r.trials.size() << " trials, " << (r.passed() ? "all checks pass" : "some checks fail")
    << "\n";
  for (const auto& [k, v] : r.checks.items()) s << "  " << k << ": " << (v.get<bool>() ? "pass" : "FAIL") << "\n";
  emit(c, r.to_json(), s.str(), out, err);
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Condition numbers of linear programs: bounds, oracles and smoothed-analysis experiments", "condlp"};
  app.require_subcommand(1);
  CliConfig c;

  auto common = [&](CLI::App* s) {
    s->add_option("--seed", c.seed, "master seed")->capture_default_str();
    s->add_option("--tol-feas", c.tol_feas, "feasibility tolerance")->capture_default_str();
    s->add_option("--tol-opt", c.tol_opt, "optimality tolerance")->capture_default_str();
    s->add_option("--out", c.out, "write the JSON report here (default: stdout)");
    s->add_option("--probes", c.probes, "random flip directions per rho upper bound")->capture_default_str();
    s->add_option("--orders", c.orders, "row orders for the infeasible lower bound")->capture_default_str();
  };

  auto* condition = app.add_subcommand("condition", "condition-number interval of an instance file");
  condition->add_option("--input", c.input, "instance JSON")->required();
  condition->add_option("--form", c.form, "override the form in the file (1-4)");
  common(condition);

  auto* experiment = app.add_subcommand("experiment", "run a Monte Carlo experiment");
  experiment->add_option("name", c.experiment, "experiment name")->required()->check(CLI::IsMember(kExperiments));
  experiment->add_option("--input", c.input, "center instance (tail, expectation) or row centers (independence)");
  experiment->add_option("--form", c.form, "form of the zero center (default 1)");
  experiment->add_option("--sigma", c.sigma,
                         "noise level (default 1/sqrt(nd) for tail/expectation, 0.5 boundary, 1 otherwise)");
  experiment->add_option("--trials", c.trials,
                         "trials (default 200 tail/expectation/counterexample, 1e5 boundary and tail facts, 1e4 "
                         "otherwise)");
  experiment->add_option("--delta", c.deltas, "tail failure probability, repeatable (default 0.25 0.5)");
  experiment->add_option("--csv", c.csv, "write per-trial CSV here");
  experiment->add_option("--n", c.n, "rows (default 2; 4 for independence; 8 for counterexample)");
  experiment->add_option("--d", c.d, "columns or dimension (default 2)");
  experiment->add_option("--model", c.model, "perturbation model")
      ->check(CLI::IsMember({"gaussian", "zero-preserving", "relative"}))
      ->capture_default_str();
  experiment->add_option("--jobs", c.jobs, "worker threads")->capture_default_str();
  experiment->add_flag("--no-timing", c.no_timing, "omit wall-clock time from the report");
  experiment->add_option("--eps", c.eps, "boundary width (boundary, wide-one)")->capture_default_str();
  experiment->add_option("--body", c.body, "boundary body")
      ->check(CLI::IsMember({"ball", "halfspace", "cube"}))
      ->capture_default_str();
  experiment->add_option("--center", c.center, "center vector (boundary, wide-one; default 0)");
  experiment->add_option("--strict", c.strict, "1-based strict coordinates of the wide-one cone (default d)");
  experiment->add_option("--c", c.c_values, "tail multiple c >= 1 for gaussian-tail (default 2)");
  experiment->add_option("--ratio", c.ratios, "eps/sigma for small-ball (default 0.5)");
  common(experiment);

  auto* oracle = app.add_subcommand("oracle", "brute-force oracle interval for a tiny instance");
  oracle->add_option("--input", c.input, "instance JSON")->required();
  oracle->add_option("--form", c.form, "override the form in the file (1-3)");
  oracle->add_option("--resolution", c.resolution, "oracle resolution")->capture_default_str();
  oracle->add_option("--samples", c.samples, "oracle samples")->capture_default_str();
  common(oracle);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 1;
  }

  try {
    if (condition->parsed()) {
      c.command = "condition";
      return cmd_condition(c, out, err);
    }
    if (experiment->parsed()) {
      c.command = "experiment";
      return cmd_experiment(c, out, err);
    }
    c.command = "oracle";
    return cmd_oracle(c, out, err);
  } catch (const SolverNonconvergence& e) {
    err << "error: solver did not converge: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

int run_cli(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run_cli(args, std::cout, std::cerr);
}

}  // namespace condlp
