#include "dgsam/convergence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dgsam/errors.hpp"
#include "dgsam/optimizers.hpp"
#include "dgsam/spectrum.hpp"

namespace dgsam {

void ConvergenceBudget::validate() const {
  if (!(L > 0.0) || !std::isfinite(L)) throw ConfigError("convergence budget: L must be > 0");
  for (double m : {M1, M2, M3, M4}) {
    if (!(m >= 0.0) || !std::isfinite(m)) {
      throw ConfigError("convergence budget: M1..M4 must be finite and >= 0");
    }
  }
  if (S == 0) throw ConfigError("convergence budget: S must be >= 1");
  if (!(epsilon > 0.0)) throw ConfigError("convergence budget: epsilon must be > 0");
}

double gamma_bar_at(const ConvergenceBudget& b, double T) {
  const double S = static_cast<double>(b.S);
  double g = 1.0;
  if (b.M1 > 0.0 && T > 0.0) g = std::min(g, 1.0 / (S * std::sqrt(2.0 * b.M1 * b.L * T)));
  if (b.M2 > 0.0) g = std::min(g, 1.0 / (4.0 * b.M2 * b.L));
  if (b.M3 > 0.0) g = std::min(g, b.epsilon * b.epsilon / (12.0 * b.M3 * S * b.L));
  return g;
}

ConvergenceConstants convergence_constants(const ConvergenceBudget& b) {
  b.validate();
  const double S = static_cast<double>(b.S);
  const double eps2 = b.epsilon * b.epsilon;
  ConvergenceConstants c;

  const double branch = std::max({1.0, 24.0 * b.M1 * b.M4 * S * b.L / eps2, 4.0 * b.M2 * b.L,
                                  12.0 * b.M3 * S * b.L});
  double T = 12.0 * b.M4 / (eps2 * S) * branch;
  double gamma = gamma_bar_at(b, T);
  for (c.rounds = 1; c.rounds <= 3; ++c.rounds) {
    gamma = gamma_bar_at(b, T);
    const double required = 12.0 * b.M4 / (eps2 * S * gamma);
    if (required <= T * (1.0 + 1e-12)) break;
    T = required;
  }
  c.rounds = std::min(c.rounds, 3);
  c.T_min_real = T;
  c.T_min = static_cast<std::uint64_t>(std::ceil(T * (1.0 - 1e-12)));
  c.gamma_bar = gamma_bar_at(b, T);
  c.rho_bar = (1.0 / (S * b.L)) *
              std::min({1.0, eps2 / 12.0, b.epsilon / (2.0 * std::sqrt(6.0 * b.L))});
  return c;
}

QuadraticErConstants quadratic_er_constants(const QuadraticDomainEnsemble& e) {
  e.validate();
  const std::size_t s = e.domain_count();
  const Eigen::MatrixXd Hbar = e.total_hessian();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(Hbar);
  if (eig.eigenvalues().minCoeff() <= 0.0) {
    throw ConfigError("quadratic ER constants need a positive definite mean Hessian");
  }

  QuadraticErConstants out;
  Eigen::VectorXd bbar = Eigen::VectorXd::Zero(Hbar.rows());
  for (const auto& b : e.anchor_gradients) {
    bbar += Eigen::Map<const Eigen::VectorXd>(b.data().data(), Hbar.rows());
  }
  bbar /= static_cast<double>(s);
  const Eigen::VectorXd shift = -Hbar.ldlt().solve(bbar);
  std::vector<double> star(e.anchor.data());
  for (Eigen::Index k = 0; k < shift.size(); ++k) star[static_cast<std::size_t>(k)] += shift(k);
  out.minimizer = ParameterVector(star);
  out.min_loss = total_loss(e.to_problem(), out.minimizer);

  bool shared = true;
  double residual2 = 0.0;
  Eigen::MatrixXd second = Eigen::MatrixXd::Zero(Hbar.rows(), Hbar.cols());
  for (std::size_t i = 0; i < s; ++i) {
    const auto& H = e.hessians[i];
    out.L = std::max(out.L, H.cwiseAbs().maxCoeff() > 0.0
                                ? std::max(std::abs(max_eigenvalue(H)), std::abs(min_eigenvalue(H)))
                                : 0.0);
    if ((H - e.hessians.front()).cwiseAbs().maxCoeff() > 1e-14 * std::max(1.0, H.cwiseAbs().maxCoeff())) {
      shared = false;
    }
    const Eigen::VectorXd r =
        Eigen::Map<const Eigen::VectorXd>(e.anchor_gradients[i].data().data(), H.rows()) + H * shift;
    residual2 += r.squaredNorm();
    second += H * H;
  }
  residual2 /= static_cast<double>(s);
  second /= static_cast<double>(s);

  if (shared) {
    out.M1 = 0.0;
    out.M2 = 1.0;
    out.M3 = residual2;
  } else {
    const Eigen::MatrixXd inv_sqrt = eig.operatorInverseSqrt();
    const double kappa = max_eigenvalue(inv_sqrt * second * inv_sqrt);
    out.M1 = 2.0 * kappa;
    out.M2 = 0.0;
    out.M3 = 2.0 * residual2;
  }
  return out;
}

ConvergenceBudget quadratic_budget(const QuadraticDomainEnsemble& ensemble,
                                   const ParameterVector& theta0, double epsilon) {
  const QuadraticErConstants er = quadratic_er_constants(ensemble);
  ConvergenceBudget b;
  b.L = er.L;
  b.M1 = er.M1;
  b.M2 = er.M2;
  b.M3 = er.M3;
  b.M4 = std::max(0.0, total_loss(ensemble.to_problem(), theta0) - er.min_loss);
  b.S = ensemble.domain_count();
  b.epsilon = epsilon;
  return b;
}

ConvergenceBudget sampled_budget(const MultiDomainProblem& problem,
                                 const std::vector<ParameterVector>& sample_points,
                                 const ParameterVector& theta0, double min_loss, double epsilon,
                                 std::uint64_t seed) {
  if (sample_points.empty()) throw ConfigError("sampled_budget: need sample points");
  const ObjectivePtr avg = AveragedObjective::of(problem);
  ConvergenceBudget b;
  b.S = problem.domain_count();
  b.epsilon = epsilon;
  b.M2 = 1.0;
  double L = 0.0;
  double spread = 0.0;
  std::uint64_t k = seed;
  for (const auto& p : sample_points) {
    for (const auto& d : problem.domains()) {
      L = std::max(L, std::abs(top_eigenvalue(*d, p, 5000, 1e-6, k++).value));
    }
    double mean_sq = 0.0;
    for (const auto& d : problem.domains()) {
      const ParameterVector g = d->gradient(p);
      mean_sq += dot(g, g);
    }
    mean_sq /= static_cast<double>(problem.domain_count());
    const ParameterVector gs = total_gradient(problem, p);
    spread = std::max(spread, mean_sq - dot(gs, gs));
  }
  b.L = 1.5 * L;
  b.M3 = 2.0 * spread;
  b.M4 = std::max(0.0, avg->loss(theta0) - min_loss);
  return b;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "PASS";
    case Verdict::Fail: return "FAIL";
    case Verdict::Inconclusive: return "INCONCLUSIVE";
  }
  return "UNKNOWN";
}

StationarityReport empirical_stationarity_test(const MultiDomainProblem& problem,
                                               const ConvergenceBudget& budget,
                                               const ParameterVector& theta0, std::uint64_t seed,
                                               std::uint64_t cap, std::size_t batch_size) {
  StationarityReport r;
  r.budget = budget;
  r.constants = convergence_constants(budget);
  r.cap = cap;

  OptimizerConfig cfg;
  cfg.kind = OptimizerKind::Dgsam;
  cfg.learning_rate = r.constants.gamma_bar;
  cfg.perturbation_radius = r.constants.rho_bar;
  cfg.batch_size = batch_size;
  cfg.seed = seed;
  cfg.validate();

  OptimizerState state(theta0, seed);
  r.initial_grad_norm = norm2(total_gradient(problem, theta0));
  r.min_grad_norm = r.initial_grad_norm;
  const std::uint64_t limit = std::min(r.constants.T_min, cap);
  while (r.min_grad_norm > budget.epsilon && r.steps_run < limit) {
    state = dgsam_step(problem, std::move(state), cfg);
    ++r.steps_run;
    const double gn = norm2(total_gradient(problem, state.theta));
    if (!std::isfinite(gn)) throw NumericError("stationarity test: gradient became non-finite");
    if (gn < r.min_grad_norm) {
      r.min_grad_norm = gn;
      r.argmin_iteration = r.steps_run;
    }
  }
  if (r.min_grad_norm <= budget.epsilon) {
    r.verdict = Verdict::Pass;
  } else if (r.constants.T_min > cap) {
    r.verdict = Verdict::Inconclusive;
  } else {
    r.verdict = Verdict::Fail;
  }
  return r;
}

}  // namespace dgsam
