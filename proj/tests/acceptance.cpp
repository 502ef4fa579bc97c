#include <Eigen/Eigenvalues>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "dgsam/convergence.hpp"
#include "dgsam/curvature_decomposition.hpp"
#include "dgsam/fake_flat.hpp"
#include "dgsam/finite_difference.hpp"
#include "dgsam/finite_support_loss.hpp"
#include "dgsam/harness/commands.hpp"
#include "dgsam/mlp_objective.hpp"
#include "dgsam/optimizers.hpp"
#include "dgsam/perturbation_trace.hpp"
#include "dgsam/quadratic_objective.hpp"
#include "dgsam/sharpness.hpp"
#include "dgsam/spectrum.hpp"
#include "dgsam/synthetic_dataset.hpp"
#include "dgsam/theory_checks.hpp"
#include "dgsam/worst_case.hpp"
#include "oracles.hpp"

using namespace dgsam;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string fmt(const char* f, double a, double b) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

std::string fmt(const char* f, double a, double b, double c) {
  char buf[200];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

MultiDomainProblem quadratic_family(std::size_t s) {
  std::vector<ObjectivePtr> parts;
  for (std::size_t i = 0; i < s; ++i) {
    parts.push_back(QuadraticObjective::diagonal({1.0 + static_cast<double>(i), 2.0, 0.5}));
  }
  return MultiDomainProblem(parts);
}

MultiDomainProblem mlp_family(std::size_t s, std::size_t points = 64) {
  SyntheticDatasetParams params;
  params.domains = s;
  params.points_per_domain = points;
  MlpArchitecture arch;
  arch.layer_sizes = {2, 8, 2};
  return make_mlp_problem(SyntheticDomainDataset::generate(params), arch);
}

// 1. Gradient-evaluation counters per optimizer step.
Outcome cost_counters() {
  std::size_t mismatches = 0;
  for (std::size_t s : {1u, 2u, 3u, 5u}) {
    const std::uint64_t expected[] = {s, 2 * s, s + 1};
    const MultiDomainProblem problems[] = {quadratic_family(s), mlp_family(s)};
    for (const auto& p : problems) {
      const ParameterVector t0 = p.dimension() == 3 ? ParameterVector{1.0, 1.0, 1.0}
                                                    : MlpArchitecture{{2, 8, 2}}.initialize(0);
      int k = 0;
      for (auto kind : {OptimizerKind::Erm, OptimizerKind::Sam, OptimizerKind::Dgsam}) {
        OptimizerConfig cfg;
        cfg.kind = kind;
        cfg.batch_size = 16;
        OptimizerState st(t0, 1);
        for (int it = 0; it < 5; ++it) {
          const auto before = st.grad_evals;
          st = optimizer_step(p, std::move(st), cfg);
          mismatches += st.grad_evals - before != expected[k];
        }
        ++k;
      }
    }
  }
  return {mismatches == 0, "S in {1,2,3,5}, quadratic + MLP, mismatches=" + std::to_string(mismatches)};
}

// 2. Fake-flat endpoint sharpness: DGSAM vs SAM among seeds where ERM and SAM settle at R2.
Outcome fake_flat_reproduction() {
  const FakeFlatLandscape ff;
  const auto& p = ff.problem();
  const ParameterVector c2 = ff.fake_flat_minimum();
  auto mean_individual = [&](const ParameterVector& t) {
    double s = 0.0;
    for (std::size_t d = 0; d < 2; ++d) {
      s += oracle::disk_grid_sharpness(
          [&](double x, double y) { return p.domain(d).loss(ParameterVector{x, y}); }, t[0], t[1], 0.05);
    }
    return s / 2.0;
  };
  std::size_t eligible = 0;
  std::size_t wins = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    SeededRng rng(seed);
    const ParameterVector t0{rng.uniform(-4.0, 4.0), rng.uniform(-4.0, 4.0)};
    ParameterVector ends[3];
    int k = 0;
    for (auto kind : {OptimizerKind::Erm, OptimizerKind::Sam, OptimizerKind::Dgsam}) {
      OptimizerConfig cfg;
      cfg.kind = kind;
      cfg.learning_rate = 0.5;
      cfg.perturbation_radius = 0.05;
      cfg.max_iterations = 1000;
      cfg.seed = seed;
      ends[k++] = run(p, cfg, t0, StopCriteria{1000, 0.0}, false).final_theta;
    }
    if (norm2(ends[0] - c2) > 0.3 || norm2(ends[1] - c2) > 0.3) continue;
    ++eligible;
    if (mean_individual(ends[2]) <= 0.5 * mean_individual(ends[1])) ++wins;
  }
  const double frac = eligible ? static_cast<double>(wins) / static_cast<double>(eligible) : 0.0;
  return {eligible > 0 && frac >= 0.8,
          "seeds at R2 under ERM+SAM=" + std::to_string(eligible) + ", DGSAM <= 0.5x SAM in " +
              std::to_string(wins) + fmt(" (%.0f%%)", 100.0 * frac)};
}

// 3. Flat-vs-fake-flat ordering witness.
Outcome prop1_witness() {
  double worst = INFINITY;
  for (double rho : {0.001, 0.005, 0.01, 0.05}) {
    const auto r = build_prop1_counterexample(rho);
    worst = std::min({worst, r.global2 - r.global1, r.mean_individual1 - r.mean_individual2});
    if (!r.global_ordering || !r.individual_ordering) return {false, fmt("ordering broken at rho=%g", rho)};
  }
  return {worst >= 1e-10, fmt("smallest margin %.3e", worst)};
}

// 4. Bound on random instances plus the violation witness.
Outcome bound_suite() {
  std::size_t pass = 0;
  std::size_t measured = 0;
  double min_slack = INFINITY;
  for (std::size_t i = 0; i < 200; ++i) {
    SeededRng rng(1000003ULL * 7 + i);
    const auto inst = random_bound_instance(rng, static_cast<Divergence>(i % 3));
    const auto r = check_theorem1_bound(inst.problem, inst.theta, inst.divergence, inst.delta);
    pass += r.pass;
    measured += r.holds_with_measured_sharpness;
    min_slack = std::min(min_slack, r.slack);
  }
  double worst_margin_err = 0.0;
  for (double t : {0.1, 0.5, 1.0}) {
    const auto v = global_sharpness_violation(t, std::log(2.0));
    worst_margin_err = std::max(worst_margin_err, std::abs(v.margin - t));
  }
  return {pass == 200 && worst_margin_err <= 1e-9,
          std::to_string(pass) + "/200 hold, min slack " + fmt("%.3e", min_slack) +
              fmt(", violation |margin - theta| <= %.1e", worst_margin_err) +
              "; with measured sharpness instead of G*rho: " + std::to_string(measured) + "/200"};
}

// 5. Worst-case solvers vs simplex-grid brute force.
Outcome worst_case_oracle() {
  SeededRng rng(2024);
  double worst[3] = {0.0, 0.0, 0.0};
  auto simplex = [&] {
    std::array<double, 3> p{};
    double s = 0.0;
    for (auto& v : p) s += (v = 0.05 + rng.uniform());
    for (auto& v : p) v /= s;
    return p;
  };
  for (int rep = 0; rep < 50; ++rep) {
    for (int kind = 0; kind < 3; ++kind) {
      const auto p = simplex();
      const std::array<double, 3> l{rng.uniform(), rng.uniform(), rng.uniform()};
      const std::vector<double> pv(p.begin(), p.end());
      const std::vector<double> lv(l.begin(), l.end());
      double solver = 0.0;
      double brute = 0.0;
      if (kind == 0) {
        const double delta = rng.uniform(0.01, 1.0);
        solver = worst_case_kl(lv, pv, delta).value;
        brute = oracle::simplex_grid_max(l, p, [&](const auto& q) { return oracle::kl(q, p); }, delta);
      } else if (kind == 1) {
        const double delta = rng.uniform(0.01, 0.6);
        solver = worst_case_tv(lv, pv, delta).value;
        brute = oracle::simplex_grid_max(l, p, [&](const auto& q) { return oracle::tv(q, p); }, delta);
      } else {
        std::vector<double> xs{rng.uniform(0, 2), rng.uniform(0, 2), rng.uniform(0, 2)};
        std::sort(xs.begin(), xs.end());
        Eigen::MatrixXd m(3, 3);
        for (int i = 0; i < 3; ++i) {
          for (int j = 0; j < 3; ++j) m(i, j) = std::abs(xs[i] - xs[j]);
        }
        const double delta = rng.uniform(0.01, 0.5);
        solver = worst_case_w1(lv, pv, m, delta).value;
        brute = oracle::simplex_grid_max(
            l, p, [&](const auto& q) { return oracle::w1_line({q.begin(), q.end()}, pv, xs); }, delta);
      }
      worst[kind] = std::max(worst[kind], std::abs(solver - brute));
    }
  }
  const double w = std::max({worst[0], worst[1], worst[2]});
  return {w <= 1e-4, fmt("max |solver - brute| KL %.1e, TV %.1e, W1 %.1e", worst[0], worst[1], worst[2])};
}

// 6. Stationarity on a convex quadratic ensemble plus the worked constant.
Outcome convergence() {
  const auto c = convergence_constants(ConvergenceBudget{1.0, 1.0, 1.0, 1.0, 1.0, 2, 0.5});
  const auto o = oracle::convergence_oracle(1, 1, 1, 1, 1, 2, 0.5);
  const bool arithmetic = c.T_min == 4608 && o.T_int == 4608 && std::abs(c.gamma_bar - o.gamma) < 1e-15;
  const auto ens = harness::stationarity_ensemble();
  const auto problem = ens.to_problem();
  std::string detail = "T_min(worked)=" + std::to_string(c.T_min) + ", oracle " + std::to_string(o.T_int);
  bool ok = arithmetic;
  for (double eps : {0.1, 0.01}) {
    const auto b = quadratic_budget(ens, harness::stationarity_start(), eps);
    const auto r = empirical_stationarity_test(problem, b, harness::stationarity_start(), 0, 100000);
    ok = ok && r.verdict == Verdict::Pass && r.min_grad_norm <= eps;
    detail += fmt("; eps=%g: min|grad|=%.3e", eps, r.min_grad_norm) + " after " +
              std::to_string(r.steps_run) + " steps (" + to_string(r.verdict) + ")";
  }
  return {ok, detail};
}

// 7. Curvature term of the sequential gradient and its Taylor residual.
Outcome decomposition() {
  SyntheticDatasetParams params;
  params.domains = 3;
  params.points_per_domain = 200;
  MlpArchitecture arch;
  const auto problem = make_mlp_problem(SyntheticDomainDataset::generate(params), arch);
  OptimizerConfig cfg;
  cfg.kind = OptimizerKind::Dgsam;
  cfg.learning_rate = 0.1;
  cfg.perturbation_radius = 0.05;
  OptimizerState st(arch.initialize(0), 0);
  double share = 0.0;
  double ratio_full = 0.0;
  double ratio_half = 0.0;
  std::size_t n = 0;
  for (std::uint64_t it = 0; it < 20; ++it) {
    const auto full = curvature_term_decomposition(problem, st.theta, 0.05, 100 + it);
    const auto half = curvature_term_decomposition(problem, st.theta, 0.025, 100 + it);
    for (std::size_t j = 1; j < full.size(); ++j) {
      share += full[j].second_norm / full[j].first_norm;
      ratio_full += full[j].residual_ratio;
      ratio_half += half[j].residual_ratio;
      ++n;
    }
    st = optimizer_step(problem, std::move(st), cfg);
  }
  share /= static_cast<double>(n);
  const double halving = ratio_half / ratio_full;
  return {share >= 0.1 && halving >= 0.35 && halving <= 0.65,
          fmt("mean |second|/|first| at j>=2 = %.3f, residual ratio %.3e -> %.3e", share, ratio_full / n,
              ratio_half / n) +
              fmt(" (x%.3f)", halving)};
}

// 8. Lanczos moments vs exact spectra within 3 Hutchinson standard errors.
Outcome spectrum() {
  std::string detail;
  bool ok = true;
  auto check = [&](const DomainObjective& obj, const Eigen::VectorXd& eig, const char* name) {
    const ParameterVector zero = ParameterVector::zeros(static_cast<std::size_t>(eig.size()));
    SpectrumConfig cfg;
    cfg.probes = 64;
    cfg.seed = 5;
    const auto est = lanczos_spectrum(obj, zero, cfg);
    double z_max = 0.0;
    for (int p : {1, 2}) {
      const double exact = eig.array().pow(p).mean();
      const auto h = hutchinson_moment(obj, zero, p, 128, 77 + static_cast<std::uint64_t>(p), ProbeKind::Gaussian);
      const double z_lanczos = std::abs(est.moment(p) - exact) / h.stderr_;
      const double z_hutch = std::abs(h.mean - exact) / h.stderr_;
      ok = ok && z_lanczos <= 3.0 && z_hutch <= 3.0;
      z_max = std::max({z_max, z_lanczos, z_hutch});
    }
    detail += std::string(detail.empty() ? "" : "; ") + name + fmt(": max |err|/sigma = %.2f", z_max);
  };
  const auto diag = QuadraticObjective::diagonal({1.0, 2.0, 3.0});
  check(*diag, Eigen::Vector3d(1.0, 2.0, 3.0), "diag(1,2,3)");
  SeededRng rng(50);
  Eigen::MatrixXd a(50, 50);
  for (int i = 0; i < 50; ++i) {
    for (int j = 0; j < 50; ++j) a(i, j) = rng.normal();
  }
  const Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
  const Eigen::MatrixXd q = qr.householderQ();
  Eigen::VectorXd lam(50);
  for (int i = 0; i < 50; ++i) lam(i) = rng.uniform(-2.0, 5.0);
  const Eigen::MatrixXd h = q * lam.asDiagonal() * q.transpose();
  const QuadraticObjective dense(0.5 * (h + h.transpose()), ParameterVector::zeros(50), ParameterVector::zeros(50));
  check(dense, lam, "random 50x50");
  return {ok, detail};
}

// 9. Perturbation trace directions at the fake-flat minimum.
Outcome perturbation_direction() {
  const FakeFlatLandscape ff;
  const auto seq = perturbation_trace(ff.problem(), ff.fake_flat_minimum(), 0.05, 1,
                                      PerturbationStrategy::Sequential, 0);
  const auto tot = perturbation_trace(ff.problem(), ff.fake_flat_minimum(), 0.05, 1,
                                      PerturbationStrategy::TotalGradient, 0);
  const auto& s = seq.back();
  const auto& t = tot.back();
  const bool seq_ok = s[0] > 0.0 && s[1] > 0.0 && std::max(s[0], s[1]) / std::min(s[0], s[1]) <= 2.0;
  const bool sign_disagree = (t[0] > 0.0) != (t[1] > 0.0);
  const double tmin = std::min(std::abs(t[0]), std::abs(t[1]));
  const bool tot_ok = sign_disagree || (tmin > 0.0 && std::max(std::abs(t[0]), std::abs(t[1])) / tmin >= 5.0);
  return {seq_ok && tot_ok, fmt("sequential increments (%.3e, %.3e)", s[0], s[1]) +
                                fmt(", total-gradient increments (%.3e, %.3e)", t[0], t[1])};
}

// 10. Analytic gradients and HVPs against central differences.
Outcome gradient_integrity() {
  std::vector<std::pair<std::string, ObjectivePtr>> objs;
  SeededRng rng(10);
  {
    Eigen::MatrixXd a(4, 4);
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) a(i, j) = rng.normal();
    }
    objs.emplace_back("quadratic", std::make_shared<QuadraticObjective>(a + a.transpose(), rng.normal_vector(4),
                                                                        rng.normal_vector(4), 0.3));
  }
  const FakeFlatLandscape ff;
  objs.emplace_back("fake_flat_1", ff.problem().domain_ptr(0));
  objs.emplace_back("fake_flat_2", ff.problem().domain_ptr(1));
  const std::vector<ParameterVector> pts{{1.0, 0.2, -0.3}, {0.0, 1.0, 0.5}, {-1.0, 0.5, 0.1}, {0.3, -0.7, 1.0}};
  for (auto kind : {PointwiseLoss::Linear, PointwiseLoss::Squared, PointwiseLoss::Logistic}) {
    objs.emplace_back("finite_support_" + to_string(kind),
                      std::make_shared<FiniteSupportStatLoss>(kind, pts, std::vector<double>{1, -1, 1, -1},
                                                              std::vector<double>{0.1, 0.2, 0.3, 0.4},
                                                              ParameterBox{-2.0, 2.0}));
  }
  const auto mlp = mlp_family(2, 50);
  objs.emplace_back("mlp", mlp.domain_ptr(0));

  double worst_g = 0.0;
  double worst_h = 0.0;
  std::string worst_name;
  for (const auto& [name, obj] : objs) {
    for (int i = 0; i < 20; ++i) {
      ParameterVector t = rng.normal_vector(obj->dimension());
      if (name == "mlp") t = MlpArchitecture{{2, 8, 2}}.initialize(static_cast<std::uint64_t>(i));
      if (name.rfind("fake_flat", 0) == 0) t = ParameterVector{rng.uniform(-4, 4), rng.uniform(-4, 4)};
      const auto f = [&](const ParameterVector& x) { return obj->loss(x); };
      const auto g = [&](const ParameterVector& x) { return obj->gradient(x); };
      const ParameterVector v = rng.normal_vector(t.size());
      const double eg = relative_error(obj->gradient(t), finite_diff_gradient(f, t));
      const double eh = relative_error(obj->hessian_vector_product(t, v), finite_diff_hvp(g, t, v, 1e-5));
      if (eg > worst_g || eh > worst_h) worst_name = name;
      worst_g = std::max(worst_g, eg);
      worst_h = std::max(worst_h, eh);
    }
  }
  return {worst_g <= 1e-5 && worst_h <= 1e-4,
          std::to_string(objs.size()) + " objectives x 20 points" +
              fmt(", worst rel err grad %.2e, hvp %.2e", worst_g, worst_h) + " (" + worst_name + ")"};
}

struct Criterion {
  int id;
  const char* title;
  double budget_s;
  std::function<Outcome()> fn;
};

}  // namespace

int main(int argc, char** argv) {
  std::set<int> expected_failures;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--expect-fail") == 0 && i + 1 < argc) expected_failures.insert(std::atoi(argv[++i]));
  }
  const std::vector<Criterion> criteria{
      {1, "cost-model exactness", 1.0, cost_counters},
      {2, "fake-flat reproduction", 60.0, fake_flat_reproduction},
      {3, "ordering witness", 1.0, prop1_witness},
      {4, "worst-case bound", 30.0, bound_suite},
      {5, "worst-case oracle equivalence", 60.0, worst_case_oracle},
      {6, "convergence", 120.0, convergence},
      {7, "curvature decomposition", 120.0, decomposition},
      {8, "spectrum estimator", 30.0, spectrum},
      {9, "perturbation-trace direction", 10.0, perturbation_direction},
      {10, "gradient integrity", 60.0, gradient_integrity},
  };
  int unexpected = 0;
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.fn();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > c.budget_s) {
      out.pass = false;
      out.detail += fmt(" [over time budget %.0f s]", c.budget_s);
    }
    std::printf("criterion %2d %-30s %s  %.2fs  %s\n", c.id, c.title, out.pass ? "PASS" : "FAIL", secs,
                out.detail.c_str());
    std::fflush(stdout);
    if (!out.pass) {
      ++failed;
      if (!expected_failures.count(c.id)) ++unexpected;
    }
  }
  std::printf("%d/%zu criteria pass", static_cast<int>(criteria.size()) - failed, criteria.size());
  if (!expected_failures.empty()) {
    std::printf(" (documented expected failures:");
    for (int id : expected_failures) std::printf(" %d", id);
    std::printf(")");
  }
  std::printf("\n");
  return unexpected == 0 ? 0 : 1;
}
