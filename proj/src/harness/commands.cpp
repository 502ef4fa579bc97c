#include "dgsam/harness/commands.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <numbers>
#include <ostream>
#include <thread>

#include "dgsam/convergence.hpp"
#include "dgsam/errors.hpp"
#include "dgsam/harness/output.hpp"
#include "dgsam/landscape.hpp"
#include "dgsam/perturbation_trace.hpp"
#include "dgsam/sharpness.hpp"
#include "dgsam/spectrum.hpp"
#include "dgsam/theory_checks.hpp"

namespace dgsam::harness {
namespace {

std::vector<std::string> domain_columns(const std::string& prefix, std::size_t s) {
  std::vector<std::string> out;
  for (std::size_t i = 1; i <= s; ++i) out.push_back(prefix + std::to_string(i));
  return out;
}

Json header(const char* command, const ExperimentConfig& config) {
  Json j;
  j["toolkit_version"] = kToolkitVersion;
  j["command"] = command;
  j["config"] = to_json(config);
  return j;
}

std::uint64_t first_seed(const ExperimentConfig& config) { return config.seeds.front(); }

/// Runs fn(i) for i in [0, n) on up to `threads` workers.
template <typename Fn>
void parallel_for(std::size_t n, std::size_t threads, Fn fn) {
  threads = std::max<std::size_t>(1, std::min(threads, n));
  if (threads == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

double quantile(std::vector<double> v, double q) {
  std::sort(v.begin(), v.end());
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = static_cast<std::size_t>(std::ceil(pos));
  return v[lo] + (v[hi] - v[lo]) * (pos - static_cast<double>(lo));
}

struct JobResult {
  std::string id;
  std::uint64_t seed = 0;
  std::size_t optimizer = 0;
  std::optional<RunRecord> record;
  std::optional<TrajectoryPoint> last_finite;
  std::string error;
};

}  // namespace

ExperimentConfig effective_config(const GlobalOptions& options) {
  if (options.config_path.empty()) throw ConfigError("--config is required");
  ExperimentConfig config = load_config(options.config_path);
  if (options.out) config.output_dir = *options.out;
  if (options.seed) config.seeds = {*options.seed};
  return config;
}

int cmd_run(const GlobalOptions& options) {
  const ExperimentConfig config = effective_config(options);
  if (config.optimizers.empty()) throw ConfigError("run: the config lists no optimizers");
  const BuiltProblem built = build_problem(config.problem);
  const MultiDomainProblem& problem = *built.problem;
  const std::size_t s = problem.domain_count();

  std::vector<JobResult> jobs;
  for (std::size_t o = 0; o < config.optimizers.size(); ++o) {
    const auto kind = config.optimizers[o].config.kind;
    const bool repeated = std::count_if(config.optimizers.begin(), config.optimizers.end(),
                                        [kind](const auto& x) { return x.config.kind == kind; }) > 1;
    for (std::uint64_t seed : config.seeds) {
      JobResult job;
      job.id = to_string(kind) + (repeated ? std::to_string(o) : "") + "_seed" + std::to_string(seed);
      job.seed = seed;
      job.optimizer = o;
      jobs.push_back(std::move(job));
    }
  }

  const auto start = std::chrono::steady_clock::now();
  parallel_for(jobs.size(), options.threads, [&](std::size_t i) {
    JobResult& job = jobs[i];
    const OptimizerSpec& spec = config.optimizers[job.optimizer];
    OptimizerConfig cfg = spec.config;
    cfg.seed = job.seed;
    cfg.trajectory_stride = config.trajectory_stride;
    try {
      const ParameterVector theta0 = initial_point(config, built, job.seed);
      job.record = run(problem, cfg, theta0, StopCriteria{cfg.max_iterations, spec.grad_norm_tolerance});
    } catch (const DivergenceError& e) {
      job.error = e.what();
      job.last_finite = e.last_finite();
    }
  });
  const double total_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();

  OutputDirectory out(config.output_dir);
  std::vector<std::string> columns{"iter", "loss_total"};
  for (auto& c : domain_columns("loss_domain_", s)) columns.push_back(c);
  for (const char* c : {"grad_norm", "grad_evals", "wall_ms"}) columns.emplace_back(c);

  Json runs = Json::array();
  bool diverged = false;
  for (const auto& job : jobs) {
    CsvTable table(columns);
    auto add = [&](const TrajectoryPoint& p) {
      std::vector<double> row{static_cast<double>(p.iteration), p.loss_total};
      row.insert(row.end(), p.domain_losses.begin(), p.domain_losses.end());
      row.push_back(p.grad_norm);
      row.push_back(static_cast<double>(p.grad_evals));
      row.push_back(config.record_wall_clock ? p.wall_ms : 0.0);
      table.add_numeric_row(row);
    };
    const std::string file = "run_" + job.id + ".csv";
    Json entry;
    entry["id"] = job.id;
    entry["optimizer"] = to_string(config.optimizers[job.optimizer].config.kind);
    entry["seed"] = job.seed;
    entry["trajectory"] = file;
    if (job.record) {
      for (const auto& p : job.record->trajectory) add(p);
      double wall = 0.0;
      for (double w : job.record->step_wall_ms) wall += w;
      entry["status"] = "ok";
      entry["iterations"] = job.record->iterations;
      entry["grad_evals"] = job.record->grad_evals;
      entry["grad_evals_per_iteration"] = grad_evals_per_step(job.record->config.kind, s);
      entry["final_loss"] = job.record->final_loss;
      entry["final_grad_norm"] = job.record->final_grad_norm;
      entry["converged"] = job.record->converged;
      entry["final_theta"] = job.record->final_theta.data();
      entry["initial_theta"] = job.record->initial_theta.data();
      entry["wall_ms_total"] = wall;
    } else {
      diverged = true;
      add(*job.last_finite);
      entry["status"] = "diverged";
      entry["error"] = job.error;
      entry["last_finite_iteration"] = job.last_finite->iteration;
      entry["final_theta"] = job.last_finite->theta.data();
    }
    out.write_csv(file, table);
    runs.push_back(entry);
  }

  Json manifest = header("run", config);
  manifest["runs"] = runs;
  manifest["wall_ms_total"] = total_ms;
  out.write_manifest(manifest);
  return diverged ? kExitNumeric : kExitOk;
}

int cmd_perturb_trace(const GlobalOptions& options) {
  const ExperimentConfig config = effective_config(options);
  const BuiltProblem built = build_problem(config.problem);
  const MultiDomainProblem& problem = *built.problem;
  const std::uint64_t seed = first_seed(config);
  const ParameterVector theta = resolve_point(config.perturb_trace.point, config, built, seed);
  const std::size_t s = problem.domain_count();

  OutputDirectory out(config.output_dir);
  std::vector<std::string> columns{"step"};
  for (auto& c : domain_columns("loss_domain_", s)) columns.push_back(c);

  Json summary = Json::object();
  for (auto [strategy, name] : {std::pair{PerturbationStrategy::TotalGradient, "total"},
                                std::pair{PerturbationStrategy::Sequential, "sequential"}}) {
    const auto rows = perturbation_trace(problem, theta, config.perturb_trace.rho,
                                         config.perturb_trace.sweeps, strategy, seed);
    CsvTable table(columns);
    for (std::size_t k = 0; k < rows.size(); ++k) {
      std::vector<double> row{static_cast<double>(k)};
      row.insert(row.end(), rows[k].begin(), rows[k].end());
      table.add_numeric_row(row);
    }
    const std::string file = std::string("trace_") + name + ".csv";
    out.write_csv(file, table);
    const auto& last = rows.back();
    const auto [mn, mx] = std::minmax_element(last.begin(), last.end());
    Json j;
    j["file"] = file;
    j["final_increments"] = last;
    j["all_positive"] = *mn > 0.0;
    j["max_min_ratio"] = *mn > 0.0 ? Json(*mx / *mn) : Json(nullptr);
    summary[name] = j;
  }
  Json manifest = header("perturb-trace", config);
  manifest["theta"] = theta.data();
  manifest["rho"] = config.perturb_trace.rho;
  manifest["summary"] = summary;
  out.write_manifest(manifest);
  return kExitOk;
}

int cmd_sharpness_table(const GlobalOptions& options) {
  const ExperimentConfig config = effective_config(options);
  if (config.sharpness_table.points.empty()) throw ConfigError("sharpness_table.points is empty");
  const BuiltProblem built = build_problem(config.problem);
  const MultiDomainProblem& problem = *built.problem;
  const std::size_t s = problem.domain_count();
  const std::size_t u = problem.unseen_domains().size();
  const std::uint64_t seed = first_seed(config);

  std::vector<ParameterVector> points;
  for (const auto& p : config.sharpness_table.points) points.push_back(resolve_point(p, config, built, seed));

  std::vector<SharpnessReport> reports(points.size());
  parallel_for(points.size(), options.threads, [&](std::size_t i) {
    reports[i] = sharpness_report(problem, points[i], config.sharpness);
  });

  std::vector<std::string> columns{"point"};
  for (auto& c : domain_columns("domain_", s)) columns.push_back(c);
  for (const char* c : {"mean", "std", "total"}) columns.emplace_back(c);
  if (u > 0) {
    for (auto& c : domain_columns("unseen_", u)) columns.push_back(c);
  }
  CsvTable table(columns);
  Json rows = Json::array();
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& r = reports[i];
    std::vector<std::string> cells{describe(config.sharpness_table.points[i])};
    for (double v : r.per_domain) cells.push_back(format_number(v));
    cells.push_back(format_number(r.mean));
    cells.push_back(format_number(r.std));
    cells.push_back(format_number(r.global));
    for (double v : r.unseen) cells.push_back(format_number(v));
    table.add_row(cells);
    Json row;
    row["point"] = cells.front();
    row["theta"] = points[i].data();
    row["per_domain"] = r.per_domain;
    row["mean"] = r.mean;
    row["std"] = r.std;
    row["total"] = r.global;
    if (u > 0) row["unseen"] = r.unseen;
    rows.push_back(row);
  }
  OutputDirectory out(config.output_dir);
  out.write_csv("sharpness_table.csv", table);
  const auto& sc = config.sharpness;
  Json body;
  body["estimator"] = {{"radius", sc.radius},
                       {"method", to_string(sc.method)},
                       {"ascent_steps", sc.ascent_steps},
                       {"step_size", sc.effective_step_size()},
                       {"restarts", sc.restarts},
                       {"random_samples", sc.random_samples},
                       {"seed", sc.seed}};
  body["rows"] = rows;
  out.write_json("sharpness_table.json", body);
  out.write_manifest(header("sharpness-table", config));
  return kExitOk;
}

int cmd_cost(const GlobalOptions& options) {
  const ExperimentConfig config = effective_config(options);
  if (config.optimizers.empty()) throw ConfigError("cost: the config lists no optimizers");
  const BuiltProblem built = build_problem(config.problem);
  const MultiDomainProblem& problem = *built.problem;
  const std::size_t s = problem.domain_count();
  const std::uint64_t seed = first_seed(config);
  const ParameterVector theta0 = initial_point(config, built, seed);

  struct Row {
    std::string name;
    std::uint64_t evals_per_iter = 0;
    double median = 0.0;
    double iqr = 0.0;
  };
  std::vector<Row> rows;
  for (const auto& spec : config.optimizers) {
    OptimizerConfig cfg = spec.config;
    cfg.seed = seed;
    OptimizerState state(theta0, seed);
    for (std::size_t i = 0; i < config.cost.warmup; ++i) state = optimizer_step(problem, std::move(state), cfg);
    std::vector<double> ms;
    const std::uint64_t expected = grad_evals_per_step(cfg.kind, s);
    for (std::size_t i = 0; i < config.cost.timed; ++i) {
      const std::uint64_t before = state.grad_evals;
      const auto t0 = std::chrono::steady_clock::now();
      state = optimizer_step(problem, std::move(state), cfg);
      ms.push_back(std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count());
      if (state.grad_evals - before != expected) {
        throw NumericError("cost: " + to_string(cfg.kind) + " used " +
                           std::to_string(state.grad_evals - before) + " gradient evaluations, expected " +
                           std::to_string(expected));
      }
    }
    rows.push_back({to_string(cfg.kind), expected, quantile(ms, 0.5), quantile(ms, 0.75) - quantile(ms, 0.25)});
  }

  double erm_ms = 0.0;
  for (const auto& r : rows) {
    if (r.name == "erm") erm_ms = r.median;
  }
  CsvTable table({"optimizer", "grad_evals_per_iter", "wall_ms_median", "wall_ms_iqr", "wall_ratio_to_erm"});
  Json list = Json::array();
  for (const auto& r : rows) {
    const double ratio = erm_ms > 0.0 ? r.median / erm_ms : std::nan("");
    table.add_row({r.name, std::to_string(r.evals_per_iter), format_number(r.median), format_number(r.iqr),
                   format_number(ratio)});
    list.push_back({{"optimizer", r.name},
                    {"grad_evals_per_iter", r.evals_per_iter},
                    {"wall_ms_median", r.median},
                    {"wall_ms_iqr", r.iqr},
                    {"wall_ratio_to_erm", erm_ms > 0.0 ? Json(ratio) : Json(nullptr)}});
  }
  OutputDirectory out(config.output_dir);
  out.write_csv("cost.csv", table);
  Json body;
  body["domains"] = s;
  body["expected_ratio"] = std::to_string(s) + ":" + std::to_string(2 * s) + ":" + std::to_string(s + 1);
  body["warmup"] = config.cost.warmup;
  body["timed"] = config.cost.timed;
  body["optimizers"] = list;
  out.write_json("cost.json", body);
  out.write_manifest(header("cost", config));
  return kExitOk;
}

int cmd_landscape(const GlobalOptions& options) {
  const ExperimentConfig config = effective_config(options);
  const BuiltProblem built = build_problem(config.problem);
  const MultiDomainProblem& problem = *built.problem;
  const std::uint64_t seed = first_seed(config);
  const auto& spec = config.landscape;
  const ParameterVector center = resolve_point(spec.center, config, built, seed);
  const std::size_t dim = problem.dimension();

  ParameterVector d1;
  ParameterVector d2;
  if (spec.directions == "axis") {
    if (dim < 2) throw ConfigError("landscape: axis directions need dimension >= 2");
    d1 = ParameterVector::unit(dim, 0);
    d2 = ParameterVector::unit(dim, 1);
  } else if (spec.directions == "explicit") {
    d1 = ParameterVector(spec.dir1);
    d2 = ParameterVector(spec.dir2);
    if (d1.size() != dim || d2.size() != dim) throw ConfigError("landscape: direction dimension mismatch");
  } else {
    SeededRng rng(seed);
    std::tie(d1, d2) = random_directions(dim, rng);
  }
  const LandscapeGrid grid = landscape_grid(problem, center, d1, d2, spec.half_width, spec.resolution);

  std::vector<std::string> columns{"u", "v", "loss_total"};
  for (auto& c : domain_columns("loss_domain_", problem.domain_count())) columns.push_back(c);
  CsvTable table(columns);
  std::size_t flagged = 0;
  for (const auto& cell : grid.cells) {
    std::vector<double> row{cell.u, cell.v, cell.loss_total};
    row.insert(row.end(), cell.domain_losses.begin(), cell.domain_losses.end());
    table.add_numeric_row(row);
    if (!cell.finite) ++flagged;
  }
  OutputDirectory out(config.output_dir);
  out.write_csv("landscape.csv", table);
  Json manifest = header("landscape", config);
  manifest["center"] = center.data();
  manifest["dir1"] = grid.dir1.data();
  manifest["dir2"] = grid.dir2.data();
  manifest["non_finite_cells"] = flagged;
  out.write_manifest(manifest);
  return kExitOk;
}

int cmd_spectrum(const GlobalOptions& options) {
  const ExperimentConfig config = effective_config(options);
  const BuiltProblem built = build_problem(config.problem);
  const MultiDomainProblem& problem = *built.problem;
  const auto& spec = config.spectrum;
  const std::uint64_t seed = first_seed(config);
  const ParameterVector theta = resolve_point(spec.point, config, built, seed);
  ObjectivePtr target;
  if (spec.domain < 0) {
    target = AveragedObjective::of(problem);
  } else {
    if (static_cast<std::size_t>(spec.domain) >= problem.domain_count()) {
      throw ConfigError("spectrum.domain out of range");
    }
    target = problem.domain_ptr(static_cast<std::size_t>(spec.domain));
  }

  const SpectrumEstimate est = lanczos_spectrum(*target, theta, spec.lanczos);
  const MomentEstimate m1 =
      hutchinson_moment(*target, theta, 1, spec.hutchinson_probes, spec.lanczos.seed + 1, spec.lanczos.probe_kind);
  const MomentEstimate m2 =
      hutchinson_moment(*target, theta, 2, spec.hutchinson_probes, spec.lanczos.seed + 2, spec.lanczos.probe_kind);

  CsvTable table({"eigenvalue", "density"});
  for (std::size_t i = 0; i < est.grid.size(); ++i) table.add_numeric_row({est.grid[i], est.density[i]});
  OutputDirectory out(config.output_dir);
  out.write_csv("spectrum.csv", table);

  Json probes = Json::array();
  for (const auto& p : est.probes) {
    probes.push_back({{"nodes", p.nodes}, {"weights", p.weights}, {"breakdown", p.breakdown}});
  }
  Json body;
  body["probe_count"] = est.probe_count;
  body["lanczos_iterations"] = est.iterations;
  body["sigma"] = est.sigma;
  body["lambda_min"] = est.lambda_min;
  body["lambda_max"] = est.lambda_max;
  body["density_mass"] = est.density_mass();
  body["moment1"] = est.moment(1);
  body["moment2"] = est.moment(2);
  body["hutchinson_moment1"] = {{"mean", m1.mean}, {"stderr", m1.stderr_}};
  body["hutchinson_moment2"] = {{"mean", m2.mean}, {"stderr", m2.stderr_}};
  body["any_breakdown"] = est.any_breakdown();
  body["probes"] = probes;
  out.write_json("spectrum.json", body);
  out.write_manifest(header("spectrum", config));
  return kExitOk;
}

QuadraticDomainEnsemble stationarity_ensemble() {
  QuadraticDomainEnsemble e;
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(4, 4);
  H.diagonal() << 1.0, 0.8, 0.6, 0.5;
  e.hessians = {H, H, H};
  e.anchor_gradients = {ParameterVector{0.05, 0.0, 0.0, 0.0}, ParameterVector{-0.025, 0.04, 0.0, 0.0},
                        ParameterVector{-0.025, -0.04, 0.0, 0.0}};
  e.anchor = ParameterVector::zeros(4);
  e.force_zero_total_gradient = true;
  e.validate();
  return e;
}

ParameterVector stationarity_start() { return ParameterVector{1.0, 1.0, 1.0, 1.0}; }

int cmd_verify_theory(const GlobalOptions& options) {
  const ExperimentConfig config = effective_config(options);
  const auto& spec = config.verify_theory;
  const std::uint64_t seed = first_seed(config);
  std::size_t failures = 0;
  Json body;

  // Bound on random finite-support instances, cycling through the divergences.
  {
    const Divergence kinds[] = {Divergence::KL, Divergence::TV, Divergence::W1};
    std::vector<BoundReport> reports(spec.theorem1_instances);
    std::vector<std::string> names(spec.theorem1_instances);
    parallel_for(spec.theorem1_instances, options.threads, [&](std::size_t i) {
      SeededRng rng(seed * 1000003ULL + i);
      const RandomBoundInstance inst = random_bound_instance(rng, kinds[i % 3]);
      reports[i] = check_theorem1_bound(inst.problem, inst.theta, inst.divergence, inst.delta, config.sharpness);
      names[i] = to_string(inst.divergence);
    });
    Json list = Json::array();
    std::size_t passes = 0;
    std::size_t measured = 0;
    for (std::size_t i = 0; i < reports.size(); ++i) {
      const auto& r = reports[i];
      passes += r.pass ? 1 : 0;
      measured += r.holds_with_measured_sharpness ? 1 : 0;
      list.push_back({{"divergence", names[i]},
                      {"delta", r.delta},
                      {"rho", r.rho},
                      {"lhs", r.lhs},
                      {"rhs", r.rhs},
                      {"slack", r.slack},
                      {"verdict", r.pass ? "PASS" : "FAIL"},
                      {"rhs_measured_sharpness", r.rhs_measured},
                      {"holds_with_measured_sharpness", r.holds_with_measured_sharpness}});
    }
    failures += reports.size() - passes;
    const MultiDomainProblem example = linear_cancellation_problem();
    const BoundReport ex = check_theorem1_bound(example, ParameterVector{0.5}, Divergence::KL, std::log(2.0));
    failures += ex.pass ? 0 : 1;
    body["theorem1"] = {{"instances", reports.size()},
                        {"passes", passes},
                        {"holds_with_measured_sharpness", measured},
                        {"linear_example",
                         {{"lhs", ex.lhs}, {"rhs", ex.rhs}, {"rho", ex.rho}, {"verdict", ex.pass ? "PASS" : "FAIL"}}},
                        {"reports", list}};
  }

  {
    Json list = Json::array();
    for (double t : spec.violation_thetas) {
      const GlobalSharpnessViolation v = global_sharpness_violation(t, std::log(2.0));
      const bool ok = std::abs(v.margin - t) <= 1e-9 && v.margin > 0.0;
      failures += ok ? 0 : 1;
      list.push_back({{"theta", t},
                      {"worst_case", v.worst_case},
                      {"total_loss", v.total_loss},
                      {"global_sharpness", v.global_sharpness},
                      {"margin", v.margin},
                      {"verdict", ok ? "PASS" : "FAIL"}});
    }
    body["global_sharpness_violation"] = list;
  }

  {
    Json list = Json::array();
    for (double rho : spec.prop1_rhos) {
      Json row{{"rho", rho}};
      try {
        const Prop1Report r = build_prop1_counterexample(rho);
        row["global"] = {r.global1, r.global2};
        row["mean_individual"] = {r.mean_individual1, r.mean_individual2};
        row["verdict"] = "PASS";
      } catch (const NumericError& e) {
        row["error"] = e.what();
        row["verdict"] = "FAIL";
        ++failures;
      }
      list.push_back(row);
    }
    body["prop1"] = list;
  }

  {
    ConvergenceBudget worked{1.0, 1.0, 1.0, 1.0, 1.0, 2, 0.5};
    const ConvergenceConstants c = convergence_constants(worked);
    const bool ok = c.T_min == 4608;
    failures += ok ? 0 : 1;
    Json conv;
    conv["worked_example"] = {{"T_min", c.T_min},
                              {"gamma_bar", c.gamma_bar},
                              {"rho_bar", c.rho_bar},
                              {"verdict", ok ? "PASS" : "FAIL"}};
    const QuadraticDomainEnsemble ens = stationarity_ensemble();
    const MultiDomainProblem problem = ens.to_problem();
    Json list = Json::array();
    for (double eps : spec.stationarity_epsilons) {
      const ConvergenceBudget b = quadratic_budget(ens, stationarity_start(), eps);
      const StationarityReport r =
          empirical_stationarity_test(problem, b, stationarity_start(), seed, spec.stationarity_cap);
      if (r.verdict == Verdict::Fail) ++failures;
      list.push_back({{"epsilon", eps},
                      {"L", b.L},
                      {"M1", b.M1},
                      {"M2", b.M2},
                      {"M3", b.M3},
                      {"M4", b.M4},
                      {"T_min", r.constants.T_min},
                      {"gamma_bar", r.constants.gamma_bar},
                      {"rho_bar", r.constants.rho_bar},
                      {"steps_run", r.steps_run},
                      {"min_grad_norm", r.min_grad_norm},
                      {"verdict", to_string(r.verdict)}});
    }
    conv["stationarity"] = list;
    body["convergence"] = conv;
  }

  body["failures"] = failures;
  OutputDirectory out(config.output_dir);
  out.write_json("verify_theory.json", body);
  out.write_manifest(header("verify-theory", config));
  return failures == 0 ? kExitOk : kExitNumeric;
}

int dispatch(const std::string& command, const GlobalOptions& options, std::ostream& err) {
  try {
    if (command == "run") return cmd_run(options);
    if (command == "perturb-trace") return cmd_perturb_trace(options);
    if (command == "sharpness-table") return cmd_sharpness_table(options);
    if (command == "cost") return cmd_cost(options);
    if (command == "landscape") return cmd_landscape(options);
    if (command == "spectrum") return cmd_spectrum(options);
    if (command == "verify-theory") return cmd_verify_theory(options);
    err << "error: unknown command '" << command << "'\n";
    return kExitConfig;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const DimensionError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const NumericError& e) {
    err << "numeric failure: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const nlohmann::json::exception& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  }
}

}  // namespace dgsam::harness
