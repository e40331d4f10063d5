#include "condlp/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <thread>

#include "condlp/errors.hpp"
#include "condlp/io.hpp"

namespace condlp {

using nlohmann::ordered_json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double read_number(const ordered_json& j) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    return kNaN;
  }
  return j.get<double>();
}

ordered_json vector_json(const Vector& v) {
  ordered_json a = ordered_json::array();
  for (Index i = 0; i < v.size(); ++i) a.push_back(json_number(v(i)));
  return a;
}

Vector json_vector(const ordered_json& j) {
  Vector v(static_cast<Index>(j.size()));
  for (size_t i = 0; i < j.size(); ++i) v(static_cast<Index>(i)) = read_number(j[i]);
  return v;
}

// Sums in sorted order so aggregates do not depend on record order.
double sorted_sum(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  double s = 0.0;
  for (double x : v) s += x;
  return s;
}

struct Moments {
  double mean = 0.0;
  double var = 0.0;
  double stderr_mean = 0.0;
};

Moments moments(const std::vector<double>& v) {
  Moments m;
  const double n = static_cast<double>(v.size());
  if (v.empty()) return m;
  m.mean = sorted_sum(v) / n;
  if (v.size() < 2) return m;
  std::vector<double> sq;
  sq.reserve(v.size());
  for (double x : v) sq.push_back((x - m.mean) * (x - m.mean));
  m.var = sorted_sum(sq) / (n - 1.0);
  m.stderr_mean = std::sqrt(m.var / n);
  return m;
}

template <class Fn>
std::vector<TrialRecord> run_trials(Index trials, const RunOptions& run, Fn fn) {
  if (trials < 1) throw InvalidInput("trials must be positive");
  std::vector<TrialRecord> out(static_cast<size_t>(trials));
  std::atomic<Index> next{0};
  std::exception_ptr error;
  std::atomic<bool> failed{false};
  auto worker = [&]() {
    for (Index t = next++; t < trials && !failed; t = next++) {
      try {
        TrialRecord r;
        r.trial = t;
        r.seed = trial_seed(run.seed, t);
        RandomStream rng(r.seed, 0);
        fn(r, rng);
        out[static_cast<size_t>(t)] = std::move(r);
      } catch (...) {
        if (!failed.exchange(true)) error = std::current_exception();
      }
    }
  };
  const int jobs = std::max(1, run.jobs);
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (error) std::rethrow_exception(error);
  return out;
}

ordered_json options_json(const RunOptions& run) {
  ordered_json j;
  j["seed"] = run.seed;
  j["jobs"] = run.jobs;
  j["rho_orders"] = run.rho.orders;
  j["rho_probes"] = run.rho.probes;
  j["k1_samples"] = run.rho.k1_samples;
  j["probe_seed"] = run.rho.seed;
  j["tol_feas"] = run.rho.tol.feas_tol;
  j["tol_opt"] = run.rho.tol.opt_tol;
  j["max_iters"] = run.rho.tol.max_iters;
  return j;
}

ExperimentReport start(const std::string& name, const RunOptions& run) {
  ExperimentReport r;
  r.name = name;
  r.config["experiment"] = name;
  r.config["run"] = options_json(run);
  r.timing = run.timing;
  return r;
}

template <class Fn>
void timed(ExperimentReport& r, Fn fn) {
  const auto t0 = std::chrono::steady_clock::now();
  fn();
  r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void check_smoothed_hypothesis(const CanonicalInstance& base, const PerturbationModel& model) {
  base.validate();
  if (base.form == 4) throw InvalidInput("smoothed experiments need form 1, 2 or 3");
  const double n = static_cast<double>(base.A.rows()), d = static_cast<double>(base.A.cols());
  if (!(model.sigma > 0.0)) throw InvalidInput("sigma must be positive");
  if (model.sigma > (1.0 + 1e-12) / std::sqrt(n * d)) throw InvalidInput("sigma must be at most 1/sqrt(n d)");
  const double norm = std::sqrt(base.A.squaredNorm() + base.b.squaredNorm() + base.c.squaredNorm());
  if (norm > 1.0 + 1e-12) throw InvalidInput("center must satisfy |A, b, c|_F <= 1");
}

void condition_trial(const CanonicalInstance& base, const PerturbationModel& model, const RunOptions& run,
                     TrialRecord& r, RandomStream& rng) {
  const CanonicalInstance inst = perturb(base, model, rng);
  RhoOptions opt = run.rho;
  opt.seed = r.seed;
  const ConditionInterval ci = condition_interval(inst, opt);
  r.feasible = ci.primal.rho.feasible;
  r.rho_lower = ci.primal.rho.lower;
  r.rho_upper = ci.primal.rho.upper;
  r.c_lower = ci.c_lower;
  r.c_upper = ci.c_upper;
  r.values = {ci.primal.c_lower, ci.primal.c_upper, ci.dual.c_lower, ci.dual.c_upper,
              ci.dual.rho.lower,  ci.dual.rho.upper,  ci.sum_upper,    ci.dual.rho.feasible ? 1.0 : 0.0};
}

ordered_json model_json(const PerturbationModel& m) {
  ordered_json j;
  j["kind"] = to_string(m.kind);
  j["sigma"] = m.sigma;
  return j;
}

// Signed distance: positive outside the body (distance to it), negative inside (minus distance to its boundary).
double signed_distance(Body body, const Vector& x) {
  switch (body) {
    case Body::Ball:
      return x.norm() - 1.0;
    case Body::Halfspace:
      return x(0);
    case Body::Cube: {
      const Vector excess = (x.cwiseAbs().array() - 1.0).matrix();
      if (excess.maxCoeff() > 0.0) return excess.cwiseMax(0.0).norm();
      return excess.maxCoeff();
    }
  }
  return kNaN;
}

// ---- aggregation per experiment ----

void aggregate_condition(ExperimentReport& r, bool tail) {
  const auto& cfg = r.config;
  const Index n = cfg["n"].get<Index>(), d = cfg["d"].get<Index>();
  const double sigma = cfg["model"]["sigma"].get<double>();
  std::vector<double> cu;
  for (const auto& t : r.trials) cu.push_back(t.c_upper);
  const Index T = static_cast<Index>(cu.size());
  ordered_json agg;
  agg["trials"] = T;
  Index infinite = 0, feasible = 0;
  for (const auto& t : r.trials) {
    infinite += std::isinf(t.c_upper) ? 1 : 0;
    feasible += t.feasible ? 1 : 0;
  }
  agg["infinite_c_upper"] = infinite;
  agg["primal_feasible"] = feasible;
  if (tail) {
    std::vector<double> sorted = cu;
    std::sort(sorted.begin(), sorted.end());
    ordered_json per = ordered_json::array();
    bool all = true;
    for (const auto& dj : cfg["deltas"]) {
      const double delta = dj.get<double>();
      const double thr = smoothed_tail_threshold(n, d, sigma, delta);
      Index exceed = 0;
      for (double c : cu) exceed += c > thr ? 1 : 0;
      const double freq = static_cast<double>(exceed) / static_cast<double>(T);
      const double hw = binomial_halfwidth(freq, T, 3.0);
      const Index qi = std::clamp<Index>(static_cast<Index>(std::ceil((1.0 - delta) * static_cast<double>(T))) - 1, 0, T - 1);
      ordered_json e;
      e["delta"] = delta;
      e["threshold"] = json_number(thr);
      e["exceedances"] = exceed;
      e["frequency"] = freq;
      e["halfwidth_3sigma"] = hw;
      e["quantile_level"] = 1.0 - delta;
      e["c_upper_quantile"] = json_number(sorted[static_cast<size_t>(qi)]);
      e["pass"] = freq - hw <= delta;
      all = all && e["pass"].get<bool>();
      per.push_back(e);
    }
    agg["per_delta"] = per;
    r.checks = ordered_json::object();
    r.checks["tail_frequency_within_delta"] = all;
  } else {
    auto logs = [&](auto get) {
      std::vector<double> v;
      for (const auto& t : r.trials) v.push_back(std::log2(get(t)));
      return v;
    };
    const Moments mu = moments(logs([](const TrialRecord& t) { return t.c_upper; }));
    const Moments ml = moments(logs([](const TrialRecord& t) { return t.c_lower; }));
    const Moments mp = moments(logs([](const TrialRecord& t) { return t.values.at(1); }));
    const Moments ms = moments(logs([](const TrialRecord& t) { return t.values.at(6); }));
    const double bound = smoothed_log_bound(n, d, sigma);
    agg["mean_log2_c_upper"] = json_number(mu.mean);
    agg["stderr_log2_c_upper"] = json_number(mu.stderr_mean);
    agg["mean_log2_c_lower"] = json_number(ml.mean);
    agg["stderr_log2_c_lower"] = json_number(ml.stderr_mean);
    agg["mean_log2_primal_c_upper"] = json_number(mp.mean);
    agg["mean_log2_sum_c_upper"] = json_number(ms.mean);
    agg["bound"] = bound;
    agg["primal_bound"] = bound - 1.0;
    r.checks = ordered_json::object();
    r.checks["mean_plus_3se_within_bound"] = std::isfinite(mu.mean) && mu.mean + 3.0 * mu.stderr_mean <= bound;
    r.checks["primal_mean_within_primal_bound"] = std::isfinite(mp.mean) && mp.mean + 3.0 * mp.stderr_mean <= bound - 1.0;
  }
  r.aggregates = agg;
}

void aggregate_boundary(ExperimentReport& r) {
  const auto& cfg = r.config;
  const Body body = parse_body(cfg["body"].get<std::string>());
  const Index d = cfg["d"].get<Index>();
  const double sigma = cfg["sigma"].get<double>(), eps = cfg["eps"].get<double>();
  const Index T = static_cast<Index>(r.trials.size());
  Index out = 0, in = 0;
  for (const auto& t : r.trials) {
    const double s = t.values.at(0);
    if (s > 0.0 && s <= eps) ++out;
    if (s <= 0.0 && -s <= eps) ++in;
  }
  const double fo = static_cast<double>(out) / static_cast<double>(T);
  const double fi = static_cast<double>(in) / static_cast<double>(T);
  const double bound = boundary_bound(d, sigma, eps);
  ordered_json agg;
  agg["trials"] = T;
  agg["outside_hits"] = out;
  agg["inside_hits"] = in;
  agg["outside_frequency"] = fo;
  agg["inside_frequency"] = fi;
  agg["bound"] = bound;
  r.checks = ordered_json::object();
  r.checks["outside_within_bound"] = fo - binomial_halfwidth(fo, T, 3.0) <= bound;
  r.checks["inside_within_bound"] = fi - binomial_halfwidth(fi, T, 3.0) <= bound;
  if (body == Body::Halfspace) {
    const double c1 = json_vector(cfg["center"])(0);
    const double po = standard_normal_cdf((eps - c1) / sigma) - standard_normal_cdf(-c1 / sigma);
    const double pi = standard_normal_cdf(-c1 / sigma) - standard_normal_cdf((-eps - c1) / sigma);
    const double so = 3.0 * std::sqrt(po * (1.0 - po) / static_cast<double>(T));
    const double si = 3.0 * std::sqrt(pi * (1.0 - pi) / static_cast<double>(T));
    agg["outside_exact"] = po;
    agg["inside_exact"] = pi;
    r.checks["outside_matches_exact"] = std::abs(fo - po) <= so;
    r.checks["inside_matches_exact"] = std::abs(fi - pi) <= si;
  }
  r.aggregates = agg;
}

void aggregate_independence(ExperimentReport& r) {
  const auto& cfg = r.config;
  const Index n = static_cast<Index>(cfg["centers"].size());
  const Index d = static_cast<Index>(cfg["centers"][0].size());
  const double sigma = cfg["sigma"].get<double>();
  Vector center_mean = Vector::Zero(d);
  for (const auto& c : cfg["centers"]) center_mean += json_vector(c);
  center_mean /= static_cast<double>(n);
  const double target = sigma * sigma / static_cast<double>(n);

  auto column = [&](Index k) {
    std::vector<double> v;
    v.reserve(r.trials.size());
    for (const auto& t : r.trials) v.push_back(t.values.at(static_cast<size_t>(k)));
    return v;
  };
  ordered_json agg;
  agg["trials"] = r.trials.size();
  agg["target_variance"] = target;
  ordered_json means = ordered_json::array(), vars = ordered_json::array(), covs = ordered_json::array();
  bool mean_ok = true, var_ok = true, cov_ok = true;
  std::vector<Moments> zm;
  for (Index j = 0; j < d; ++j) {
    const std::vector<double> z = column(j);
    const Moments m = moments(z);
    zm.push_back(m);
    std::vector<double> sq;
    for (double x : z) sq.push_back((x - m.mean) * (x - m.mean));
    const Moments ms = moments(sq);
    ordered_json e;
    e["coordinate"] = j;
    e["mean"] = m.mean;
    e["expected_mean"] = center_mean(j);
    e["stderr"] = m.stderr_mean;
    means.push_back(e);
    mean_ok = mean_ok && std::abs(m.mean - center_mean(j)) <= 3.0 * m.stderr_mean;
    ordered_json v;
    v["coordinate"] = j;
    v["variance"] = ms.mean;
    v["stderr"] = ms.stderr_mean;
    vars.push_back(v);
    var_ok = var_ok && std::abs(ms.mean - target) <= 3.0 * ms.stderr_mean;
  }
  double worst = 0.0;
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < d; ++j)
      for (Index k = 0; k < d; ++k) {
        const std::vector<double> z = column(j), x = column(d + i * d + k);
        const Moments mx = moments(x);
        std::vector<double> prod;
        for (size_t t = 0; t < z.size(); ++t) prod.push_back((z[t] - zm[static_cast<size_t>(j)].mean) * (x[t] - mx.mean));
        const Moments mc = moments(prod);
        ordered_json e;
        e["row"] = i;
        e["z_coordinate"] = j;
        e["x_coordinate"] = k;
        e["covariance"] = mc.mean;
        e["stderr"] = mc.stderr_mean;
        covs.push_back(e);
        const double zscore = mc.stderr_mean > 0.0 ? std::abs(mc.mean) / mc.stderr_mean : 0.0;
        worst = std::max(worst, zscore);
        cov_ok = cov_ok && std::abs(mc.mean) <= 3.0 * mc.stderr_mean;
      }
  agg["z_mean"] = means;
  agg["z_variance"] = vars;
  agg["covariance"] = covs;
  agg["max_covariance_zscore"] = worst;
  r.checks = ordered_json::object();
  r.checks["mean_matches_centers"] = mean_ok;
  r.checks["variance_matches"] = var_ok;
  r.checks["covariance_zero"] = cov_ok;
  r.aggregates = agg;
}

void aggregate_wide_one(ExperimentReport& r) {
  const auto& cfg = r.config;
  const Index d = cfg["d"].get<Index>();
  const double sigma = cfg["sigma"].get<double>(), eps = cfg["eps"].get<double>();
  const Index T = static_cast<Index>(r.trials.size());
  Index fe = 0, ie = 0, feasible = 0;
  for (const auto& t : r.trials) {
    feasible += t.feasible ? 1 : 0;
    // rho_upper is exact up to the kernel tolerance; count with the lower end to stay conservative
    if (t.rho_lower <= eps) (t.feasible ? fe : ie)++;
  }
  const double ff = static_cast<double>(fe) / static_cast<double>(T);
  const double fi = static_cast<double>(ie) / static_cast<double>(T);
  const double bound = boundary_bound(d, sigma, eps);
  ordered_json agg;
  agg["trials"] = T;
  agg["feasible"] = feasible;
  agg["feasible_within_eps"] = fe;
  agg["infeasible_within_eps"] = ie;
  agg["feasible_frequency"] = ff;
  agg["infeasible_frequency"] = fi;
  agg["bound"] = bound;
  r.checks = ordered_json::object();
  r.checks["feasible_within_bound"] = ff - binomial_halfwidth(ff, T, 3.0) <= bound;
  r.checks["infeasible_within_bound"] = fi - binomial_halfwidth(fi, T, 3.0) <= bound;
  r.aggregates = agg;
}

void aggregate_counterexample(ExperimentReport& r) {
  const Index n = r.config["n"].get<Index>();
  const CounterexampleParameters cp = counterexample_parameters(n);
  const Index T = static_cast<Index>(r.trials.size());
  Index good = 0, flips = 0, feasible = 0;
  std::vector<double> clb;
  for (const auto& t : r.trials) {
    if (t.values.at(0) == 0.0) continue;
    ++good;
    feasible += t.values.at(1) != 0.0 ? 1 : 0;
    flips += t.values.at(2) != 0.0 ? 1 : 0;
    clb.push_back(t.c_lower);
  }
  std::sort(clb.begin(), clb.end());
  auto median = [&]() {
    if (clb.empty()) return kNaN;
    const size_t m = clb.size() / 2;
    return clb.size() % 2 ? clb[m] : 0.5 * (clb[m - 1] + clb[m]);
  };
  const double good_fraction = static_cast<double>(good) / static_cast<double>(T);
  ordered_json agg;
  agg["trials"] = T;
  agg["eps"] = cp.eps;
  agg["sigma"] = cp.sigma;
  agg["delta"] = cp.delta;
  agg["flip_norm"] = cp.flip_norm;
  agg["guide_condition"] = cp.guide_condition;
  agg["good_trials"] = good;
  agg["good_fraction"] = good_fraction;
  agg["feasible_point_verified"] = feasible;
  agg["flips_verified"] = flips;
  agg["min_c_lower"] = json_number(clb.empty() ? kNaN : clb.front());
  agg["median_c_lower"] = json_number(median());
  r.checks = ordered_json::object();
  r.checks["good_fraction_at_least_half"] = good_fraction >= 0.5;
  r.checks["every_good_trial_flips"] = good > 0 && flips == good && feasible == good;
  r.checks["median_c_lower_at_least_1e3"] = !clb.empty() && median() >= 1e3;
  r.aggregates = agg;
}

void aggregate_gaussian_tail(ExperimentReport& r) {
  const Index d = r.config["d"].get<Index>();
  const double c = r.config["c"].get<double>();
  const double sigma = 1.0;
  const double kappa2 = c * static_cast<double>(d) * sigma * sigma;
  const Index T = static_cast<Index>(r.trials.size());
  Index hits = 0;
  for (const auto& t : r.trials) hits += t.values.at(0) >= kappa2 ? 1 : 0;
  const double f = static_cast<double>(hits) / static_cast<double>(T);
  const double bound = chi2_tail_bound(d, sigma, std::sqrt(kappa2));
  ordered_json agg;
  agg["trials"] = T;
  agg["hits"] = hits;
  agg["frequency"] = f;
  agg["bound"] = bound;
  r.checks = ordered_json::object();
  r.checks["bound_dominates"] = f - binomial_halfwidth(f, T, 3.0) <= bound;
  r.aggregates = agg;
}

void aggregate_small_ball(ExperimentReport& r) {
  const Index d = r.config["d"].get<Index>();
  const double ratio = r.config["eps_over_sigma"].get<double>();
  const Index T = static_cast<Index>(r.trials.size());
  Index hits = 0;
  for (const auto& t : r.trials) hits += t.values.at(0) <= ratio ? 1 : 0;
  const double f = static_cast<double>(hits) / static_cast<double>(T);
  const double bound = small_ball_bound(d, 1.0, ratio);
  ordered_json agg;
  agg["trials"] = T;
  agg["hits"] = hits;
  agg["frequency"] = f;
  agg["bound"] = bound;
  r.checks = ordered_json::object();
  r.checks["bound_dominates"] = f - binomial_halfwidth(f, T, 3.0) <= bound;
  r.aggregates = agg;
}

}  // namespace

std::string to_string(PerturbationKind k) {
  switch (k) {
    case PerturbationKind::Gaussian:
      return "gaussian";
    case PerturbationKind::ZeroPreserving:
      return "zero-preserving";
    case PerturbationKind::Relative:
      return "relative";
  }
  return "gaussian";
}

PerturbationKind parse_perturbation_kind(const std::string& s) {
  if (s == "gaussian") return PerturbationKind::Gaussian;
  if (s == "zero-preserving" || s == "zero_preserving") return PerturbationKind::ZeroPreserving;
  if (s == "relative") return PerturbationKind::Relative;
  throw InvalidInput("model must be gaussian, zero-preserving or relative");
}

Matrix perturb(const Matrix& center, const PerturbationModel& model, RandomStream& rng) {
  if (!(model.sigma >= 0.0)) throw InvalidInput("sigma must be nonnegative");
  Matrix out = center;
  for (Index i = 0; i < out.rows(); ++i)
    for (Index j = 0; j < out.cols(); ++j) {
      const double g = rng.normal();
      switch (model.kind) {
        case PerturbationKind::Gaussian:
          out(i, j) += model.sigma * g;
          break;
        case PerturbationKind::ZeroPreserving:
          if (out(i, j) != 0.0) out(i, j) += model.sigma * g;
          break;
        case PerturbationKind::Relative:
          out(i, j) *= 1.0 + model.sigma * g;
          break;
      }
    }
  return out;
}

Vector perturb(const Vector& center, const PerturbationModel& model, RandomStream& rng) {
  return perturb(Matrix(center), model, rng).col(0);
}

CanonicalInstance perturb(const CanonicalInstance& center, const PerturbationModel& model, RandomStream& rng) {
  CanonicalInstance out = center;
  out.A = perturb(center.A, model, rng);
  if (center.b.size()) out.b = perturb(center.b, model, rng);
  if (center.c.size()) out.c = perturb(center.c, model, rng);
  return out;
}

std::uint64_t trial_seed(std::uint64_t master, Index trial) {
  return splitmix64(splitmix64(master) ^ splitmix64(0x7a11ULL + static_cast<std::uint64_t>(trial)));
}

bool ExperimentReport::passed() const {
  for (const auto& [k, v] : checks.items())
    if (!v.get<bool>()) return false;
  return true;
}

ordered_json ExperimentReport::to_json() const {
  ordered_json j;
  j["experiment"] = name;
  j["config"] = config;
  j["aggregates"] = aggregates;
  j["checks"] = checks;
  j["passed"] = passed();
  if (timing) j["wall_seconds"] = wall_seconds;
  ordered_json t = ordered_json::array();
  for (const auto& r : trials) {
    ordered_json e;
    e["trial"] = r.trial;
    e["seed"] = r.seed;
    e["feasible"] = r.feasible;
    e["rho_lower"] = json_number(r.rho_lower);
    e["rho_upper"] = json_number(r.rho_upper);
    e["c_lower"] = json_number(r.c_lower);
    e["c_upper"] = json_number(r.c_upper);
    ordered_json v = ordered_json::array();
    for (double x : r.values) v.push_back(json_number(x));
    e["values"] = v;
    t.push_back(e);
  }
  j["trials"] = t;
  return j;
}

std::string ExperimentReport::to_csv() const {
  std::string out = "trial,seed,feasible,rho_lower,rho_upper,c_lower,c_upper\n";
  char buf[64];
  auto fmt = [&](double x) -> std::string {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
  };
  for (const auto& r : trials) {
    out += std::to_string(r.trial) + "," + std::to_string(r.seed) + "," + (r.feasible ? "1" : "0") + "," +
           fmt(r.rho_lower) + "," + fmt(r.rho_upper) + "," + fmt(r.c_lower) + "," + fmt(r.c_upper) + "\n";
  }
  return out;
}

void aggregate(ExperimentReport& r) {
  if (r.name == "tail")
    aggregate_condition(r, true);
  else if (r.name == "expectation")
    aggregate_condition(r, false);
  else if (r.name == "boundary")
    aggregate_boundary(r);
  else if (r.name == "independence")
    aggregate_independence(r);
  else if (r.name == "wide-one")
    aggregate_wide_one(r);
  else if (r.name == "counterexample")
    aggregate_counterexample(r);
  else if (r.name == "gaussian-tail")
    aggregate_gaussian_tail(r);
  else if (r.name == "small-ball")
    aggregate_small_ball(r);
  else
    throw InvalidInput("unknown experiment " + r.name);
}

double smoothed_tail_threshold(Index n, Index d, double sigma, double delta) {
  if (!(delta > 0.0) || delta > 1.0) throw InvalidInput("delta must lie in (0, 1]");
  if (!(sigma > 0.0)) throw InvalidInput("sigma must be positive");
  const double np = static_cast<double>(n + 1), dp = static_cast<double>(d + 1);
  const double core = np * np * std::pow(dp, 1.5) / (delta * sigma * sigma);
  const double lg = log2(std::ldexp(core, 10));
  return std::ldexp(core, 13) * lg * lg;
}

double smoothed_log_bound(Index n, Index d, double sigma) {
  if (!(sigma > 0.0)) throw InvalidInput("sigma must be positive");
  return 15.0 + 4.5 * log2(static_cast<double>(n * d) / sigma);
}

double boundary_bound(Index d, double sigma, double eps) {
  if (!(sigma > 0.0)) throw InvalidInput("sigma must be positive");
  if (eps < 0.0) throw InvalidInput("eps must be nonnegative");
  return 4.0 * eps * std::pow(static_cast<double>(d), 0.25) / sigma;
}

ExperimentReport run_tail_experiment(const CanonicalInstance& base, const PerturbationModel& model, Index trials,
                                     const std::vector<double>& deltas, const RunOptions& run) {
  check_smoothed_hypothesis(base, model);
  if (deltas.empty()) throw InvalidInput("delta grid must be nonempty");
  for (double dl : deltas)
    if (!(dl > 0.0) || dl > 1.0) throw InvalidInput("delta must lie in (0, 1]");
  ExperimentReport r = start("tail", run);
  r.config["n"] = base.A.rows();
  r.config["d"] = base.A.cols();
  r.config["form"] = base.form;
  r.config["model"] = model_json(model);
  r.config["trials"] = trials;
  r.config["deltas"] = deltas;
  r.config["center"] = instance_to_json(base);
  timed(r, [&] {
    r.trials = run_trials(trials, run, [&](TrialRecord& t, RandomStream& rng) { condition_trial(base, model, run, t, rng); });
  });
  aggregate(r);
  return r;
}

ExperimentReport run_expectation_experiment(const CanonicalInstance& base, const PerturbationModel& model,
                                            Index trials, const RunOptions& run) {
  check_smoothed_hypothesis(base, model);
  ExperimentReport r = start("expectation", run);
  r.config["n"] = base.A.rows();
  r.config["d"] = base.A.cols();
  r.config["form"] = base.form;
  r.config["model"] = model_json(model);
  r.config["trials"] = trials;
  r.config["center"] = instance_to_json(base);
  timed(r, [&] {
    r.trials = run_trials(trials, run, [&](TrialRecord& t, RandomStream& rng) { condition_trial(base, model, run, t, rng); });
  });
  aggregate(r);
  return r;
}

std::string to_string(Body b) {
  switch (b) {
    case Body::Ball:
      return "ball";
    case Body::Halfspace:
      return "halfspace";
    case Body::Cube:
      return "cube";
  }
  return "ball";
}

Body parse_body(const std::string& s) {
  if (s == "ball") return Body::Ball;
  if (s == "halfspace") return Body::Halfspace;
  if (s == "cube") return Body::Cube;
  throw InvalidInput("body must be ball, halfspace or cube");
}

ExperimentReport run_boundary_experiment(Body body, Index d, double sigma, double eps, const Vector& center,
                                         Index trials, const RunOptions& run) {
  if (d < 1) throw InvalidInput("d must be positive");
  if (!(sigma > 0.0)) throw InvalidInput("sigma must be positive");
  if (!(eps >= 0.0)) throw InvalidInput("eps must be nonnegative");
  const Vector c = center.size() ? center : Vector(Vector::Zero(d));
  if (c.size() != d) throw InvalidInput("center must have d entries");
  ExperimentReport r = start("boundary", run);
  r.config["body"] = to_string(body);
  r.config["d"] = d;
  r.config["sigma"] = sigma;
  r.config["eps"] = eps;
  r.config["center"] = vector_json(c);
  r.config["trials"] = trials;
  timed(r, [&] {
    r.trials = run_trials(trials, run, [&](TrialRecord& t, RandomStream& rng) {
      const double s = signed_distance(body, sample_gaussian(c, sigma, rng));
      t.feasible = s <= 0.0;
      t.rho_lower = t.rho_upper = std::abs(s);
      t.c_lower = t.c_upper = kNaN;
      t.values = {s};
    });
  });
  aggregate(r);
  return r;
}

ExperimentReport run_independence_check(const std::vector<Vector>& centers, double sigma, Index trials,
                                        const RunOptions& run) {
  if (centers.size() < 2) throw InvalidInput("independence check needs at least two rows");
  const Index d = centers[0].size();
  for (const Vector& c : centers)
    if (c.size() != d || d < 1) throw InvalidInput("centers must share a positive dimension");
  if (!(sigma > 0.0)) throw InvalidInput("sigma must be positive");
  ExperimentReport r = start("independence", run);
  ordered_json cj = ordered_json::array();
  for (const Vector& c : centers) cj.push_back(vector_json(c));
  r.config["centers"] = cj;
  r.config["sigma"] = sigma;
  r.config["trials"] = trials;
  const Index n = static_cast<Index>(centers.size());
  timed(r, [&] {
    r.trials = run_trials(trials, run, [&](TrialRecord& t, RandomStream& rng) {
      Matrix A(n, d);
      for (Index i = 0; i < n; ++i) A.row(i) = sample_gaussian(centers[static_cast<size_t>(i)], sigma, rng).transpose();
      const DualDecomposition dd = decompose(A, Vector::Ones(d));
      t.feasible = true;
      t.rho_lower = t.rho_upper = t.c_lower = t.c_upper = kNaN;
      t.values.assign(dd.z.data(), dd.z.data() + d);
      for (const Vector& x : dd.xs) t.values.insert(t.values.end(), x.data(), x.data() + d);
    });
  });
  aggregate(r);
  return r;
}

ExperimentReport run_wide_one_check(const ConeDescriptor& cone, const Vector& center, double sigma, double eps,
                                    Index trials, const RunOptions& run) {
  if (center.size() != cone.dim()) throw InvalidInput("center must match the cone dimension");
  if (!(sigma > 0.0)) throw InvalidInput("sigma must be positive");
  if (!(eps >= 0.0)) throw InvalidInput("eps must be nonnegative");
  ExperimentReport r = start("wide-one", run);
  r.config["d"] = cone.dim();
  if (cone.is_orthant()) {
    r.config["strict"] = cone.as_orthant().strict;
    r.config["nonneg"] = cone.as_orthant().nonneg;
  } else {
    r.config["ray"] = vector_json(cone.as_ray().direction);
  }
  r.config["center"] = vector_json(center);
  r.config["sigma"] = sigma;
  r.config["eps"] = eps;
  r.config["trials"] = trials;
  timed(r, [&] {
    r.trials = run_trials(trials, run, [&](TrialRecord& t, RandomStream& rng) {
      const RhoInterval ri = rho_single(sample_gaussian(center, sigma, rng), cone, run.rho.tol);
      t.feasible = ri.feasible;
      t.rho_lower = ri.lower;
      t.rho_upper = ri.upper;
      t.c_lower = t.c_upper = kNaN;
    });
  });
  aggregate(r);
  return r;
}

CounterexampleParameters counterexample_parameters(Index n) {
  if (n < 4) throw InvalidInput("counterexample needs n >= 4");
  CounterexampleParameters p;
  const double nn = static_cast<double>(n);
  p.eps = 1.0 / nn;
  p.sigma = 1.0 / (nn * nn);
  p.delta = p.sigma * std::sqrt(8.0 * std::log(nn));
  p.flip_norm = std::pow((p.eps + p.delta) / (1.0 - p.delta), nn - 2.0);
  p.center_norm = counterexample_center(n).norm();
  p.guide_condition = p.center_norm / p.flip_norm;
  return p;
}

// (n-1) x n bidiagonal: row i reads -x_i + eps x_{i+1} >= 0
Matrix counterexample_center(Index n) {
  if (n < 4) throw InvalidInput("counterexample needs n >= 4");
  Matrix A = Matrix::Zero(n - 1, n);
  for (Index i = 0; i + 1 < n; ++i) {
    A(i, i) = -1.0;
    A(i, i + 1) = 1.0 / static_cast<double>(n);
  }
  return A;
}

Matrix counterexample_flip(Index n) {
  const double nn = static_cast<double>(n);
  const double eps = 1.0 / nn, sigma = 1.0 / (nn * nn), delta = sigma * std::sqrt(8.0 * std::log(nn));
  Matrix D = Matrix::Zero(n - 1, n);
  D(0, n - 1) = -std::pow((eps + delta) / (1.0 - delta), nn - 2.0);
  return D;
}

ExperimentReport run_counterexample(Index n, Index trials, const RunOptions& run) {
  const CounterexampleParameters cp = counterexample_parameters(n);
  const Matrix center = counterexample_center(n);
  const Matrix flip = counterexample_flip(n);
  ExperimentReport r = start("counterexample", run);
  r.config["n"] = n;
  r.config["trials"] = trials;
  r.config["model"] = model_json({PerturbationKind::ZeroPreserving, cp.sigma});
  std::vector<Index> all(static_cast<size_t>(n));
  for (Index j = 0; j < n; ++j) all[static_cast<size_t>(j)] = j;
  const ConeDescriptor cone = ConeDescriptor::orthant(n, all);
  timed(r, [&] {
    r.trials = run_trials(trials, run, [&](TrialRecord& t, RandomStream& rng) {
      const Matrix A = perturb(center, {PerturbationKind::ZeroPreserving, cp.sigma}, rng);
      bool good = true;
      for (Index i = 0; i + 1 < n; ++i)
        good = good && std::abs(A(i, i) + 1.0) <= cp.delta && std::abs(A(i, i + 1) - cp.eps) <= cp.delta;
      t.rho_lower = kNaN;
      t.rho_upper = flip.norm();
      t.c_lower = t.c_upper = kNaN;
      const ConicFeasibilityProblem p{A, cone};
      const FeasibilityResult f = is_feasible(p, run.rho.tol);
      t.feasible = f.feasible;
      if (!good) {
        t.values = {0.0, 0.0, 0.0};
        return;
      }
      // explicit point x_i = r^(n-1-i), r = (eps - delta) / (1 + delta)
      const double ratio = (cp.eps - cp.delta) / (1.0 + cp.delta);
      Vector x(n);
      for (Index j = 0; j < n; ++j) x(j) = std::pow(ratio, static_cast<double>(n - 1 - j));
      const bool point_ok = (A * x).minCoeff() >= -1e-12 * x.maxCoeff() && x.minCoeff() > 0.0 && f.feasible;
      const bool flipped = !is_feasible(ConicFeasibilityProblem{A + flip, cone}, run.rho.tol).feasible;
      t.values = {1.0, point_ok ? 1.0 : 0.0, flipped ? 1.0 : 0.0};
      if (point_ok && flipped) {
        t.c_lower = condition_lower_from_flip(p, flip, run.rho.tol);
        t.values.push_back(t.c_lower);
      }
    });
  });
  aggregate(r);
  return r;
}

ExperimentReport run_gaussian_tail_check(Index d, double c, Index trials, const RunOptions& run) {
  if (d < 1) throw InvalidInput("d must be positive");
  if (!(c >= 1.0)) throw InvalidInput("c must be at least 1");
  ExperimentReport r = start("gaussian-tail", run);
  r.config["d"] = d;
  r.config["c"] = c;
  r.config["trials"] = trials;
  timed(r, [&] {
    r.trials = run_trials(trials, run, [&](TrialRecord& t, RandomStream& rng) {
      t.values = {rng.normal_vector(d).squaredNorm()};
      t.rho_lower = t.rho_upper = t.c_lower = t.c_upper = kNaN;
    });
  });
  aggregate(r);
  return r;
}

ExperimentReport run_small_ball_check(Index d, double eps_over_sigma, Index trials, const RunOptions& run) {
  if (d < 1) throw InvalidInput("d must be positive");
  if (!(eps_over_sigma >= 0.0)) throw InvalidInput("eps / sigma must be nonnegative");
  ExperimentReport r = start("small-ball", run);
  r.config["d"] = d;
  r.config["eps_over_sigma"] = eps_over_sigma;
  r.config["trials"] = trials;
  timed(r, [&] {
    r.trials = run_trials(trials, run, [&](TrialRecord& t, RandomStream& rng) {
      t.values = {rng.normal_vector(d).norm()};
      t.rho_lower = t.rho_upper = t.c_lower = t.c_upper = kNaN;
    });
  });
  aggregate(r);
  return r;
}

}  // namespace condlp
