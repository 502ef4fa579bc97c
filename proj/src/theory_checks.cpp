#include "dgsam/theory_checks.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dgsam/errors.hpp"

namespace dgsam {
namespace {

std::shared_ptr<const FiniteSupportStatLoss> as_finite_support(const MultiDomainProblem& problem,
                                                               std::size_t i) {
  auto p = std::dynamic_pointer_cast<const FiniteSupportStatLoss>(problem.domain_ptr(i));
  if (!p) throw ConfigError("bound check needs finite-support domains");
  return p;
}

double exact_sharpness(const DomainObjective& objective, const ParameterVector& theta, double rho) {
  SharpnessEstimatorConfig cfg;
  cfg.radius = rho;
  cfg.method = SharpnessMethod::ExactQuadratic;
  return zeroth_order_sharpness(objective, theta, cfg);
}

}  // namespace

BoundReport check_theorem1_bound(const MultiDomainProblem& problem, const ParameterVector& theta,
                                 Divergence divergence, double delta,
                                 const SharpnessEstimatorConfig& sharpness_config) {
  BoundReport r;
  r.divergence = divergence;
  r.delta = delta;
  for (std::size_t i = 0; i < problem.domain_count(); ++i) {
    const LossBounds& b = as_finite_support(problem, i)->bounds();
    r.constants.M = std::max(r.constants.M, b.M);
    r.constants.G = std::max(r.constants.G, b.G);
    r.constants.Lx = std::max(r.constants.Lx, b.Lx);
  }
  r.per_domain = per_domain_worst_case(problem, theta, divergence, delta);
  double sum = 0.0;
  for (const auto& w : r.per_domain) sum += w.value;
  r.lhs = sum / static_cast<double>(problem.domain_count());
  r.total_loss = total_loss(problem, theta);

  if (r.constants.G > 0.0) {
    r.rho = rho_of_delta(r.constants.M, r.constants.G, r.constants.Lx, divergence, delta);
    r.envelope_sharpness = r.constants.G * r.rho;
  }
  r.rhs = r.total_loss + r.envelope_sharpness;
  r.slack = r.rhs - r.lhs;
  r.pass = r.lhs <= r.rhs + 1e-8;

  double measured_sum = 0.0;
  for (std::size_t i = 0; i < problem.domain_count(); ++i) {
    double s = 0.0;
    if (r.rho > 0.0) {
      const auto& d = problem.domain(i);
      if (d.quadratic_model(theta)) {
        s = exact_sharpness(d, theta, r.rho);
      } else {
        SharpnessEstimatorConfig cfg = sharpness_config;
        cfg.radius = r.rho;
        if (cfg.method == SharpnessMethod::ExactQuadratic) cfg.method = SharpnessMethod::GradAscent;
        s = zeroth_order_sharpness(d, theta, cfg);
      }
    }
    r.measured_sharpness.push_back(s);
    measured_sum += s;
  }
  r.rhs_measured = r.total_loss + measured_sum / static_cast<double>(problem.domain_count());
  r.holds_with_measured_sharpness = r.lhs <= r.rhs_measured + 1e-8;
  return r;
}

MultiDomainProblem linear_cancellation_problem() {
  std::vector<ObjectivePtr> domains;
  for (int i = 0; i < 2; ++i) {
    domains.push_back(std::make_shared<FiniteSupportStatLoss>(
        PointwiseLoss::Linear, std::vector<ParameterVector>{ParameterVector{-1.0}, ParameterVector{1.0}},
        std::vector<double>{}, std::vector<double>{0.5, 0.5}, ParameterBox{-1.0, 1.0},
        std::nullopt, LossBounds{1.0, 1.0, 1.0}));
  }
  return MultiDomainProblem(std::move(domains));
}

GlobalSharpnessViolation global_sharpness_violation(double theta, double delta) {
  const MultiDomainProblem problem = linear_cancellation_problem();
  const ParameterVector t{theta};
  GlobalSharpnessViolation v;
  v.theta = theta;
  v.delta = delta;
  v.rho = rho_of_delta(1.0, 1.0, 1.0, Divergence::KL, delta);
  v.worst_case = average_worst_case_risk(problem, t, Divergence::KL, delta);
  v.total_loss = total_loss(problem, t);
  v.global_sharpness = v.rho > 0.0 ? exact_sharpness(*AveragedObjective::of(problem), t, v.rho) : 0.0;
  v.margin = v.worst_case - (v.total_loss + v.global_sharpness);
  return v;
}

Prop1Report build_prop1_counterexample(double rho, double c) {
  if (!(rho > 0.0 && rho <= 0.05)) throw ConfigError("prop1: rho must lie in (0, 0.05]");
  if (!(c > 0.0 && c < 1.0)) throw ConfigError("prop1: c must lie in (0, 1)");

  Prop1Report r;
  r.rho = rho;
  r.c = c;
  const double G = r.G;
  auto ensemble = [](double grad, double top) {
    QuadraticDomainEnsemble e;
    Eigen::MatrixXd H(2, 2);
    H << top, 0.0, 0.0, 0.5;
    e.hessians = {H, H};
    e.anchor_gradients = {ParameterVector{grad, 0.0}, ParameterVector{-grad, 0.0}};
    e.anchor = ParameterVector{0.0, 0.0};
    e.force_zero_total_gradient = true;
    e.validate();
    return e;
  };
  r.at_theta1 = ensemble(G, 1.0);
  r.at_theta2 = ensemble(c * G, 2.0);

  auto evaluate = [rho](const QuadraticDomainEnsemble& e, std::vector<double>& individual,
                        double& global, double& mean) {
    const MultiDomainProblem problem = e.to_problem();
    individual.clear();
    for (const auto& d : problem.domains()) individual.push_back(exact_sharpness(*d, e.anchor, rho));
    global = exact_sharpness(*AveragedObjective::of(problem), e.anchor, rho);
    mean = (individual[0] + individual[1]) / 2.0;
  };
  evaluate(r.at_theta1, r.individual1, r.global1, r.mean_individual1);
  evaluate(r.at_theta2, r.individual2, r.global2, r.mean_individual2);
  r.global_ordering = r.global2 - r.global1 >= 1e-10;
  r.individual_ordering = r.mean_individual1 - r.mean_individual2 >= 1e-10;
  if (!r.global_ordering || !r.individual_ordering) {
    std::ostringstream os;
    os.precision(17);
    os << "prop1 orderings failed: global(theta1)=" << r.global1 << " global(theta2)=" << r.global2
       << " mean_individual(theta1)=" << r.mean_individual1
       << " mean_individual(theta2)=" << r.mean_individual2;
    throw NumericError(os.str());
  }
  return r;
}

RandomBoundInstance random_bound_instance(SeededRng& rng, Divergence divergence,
                                          std::size_t max_support, std::size_t max_domains) {
  if (max_support < 2 || max_domains < 1) throw ConfigError("random_bound_instance: bad limits");
  const std::size_t dim = 1 + rng.index(3);
  const std::size_t domains = 1 + rng.index(max_domains);
  const ParameterBox box{-1.0, 1.0};
  std::vector<ObjectivePtr> parts;
  for (std::size_t i = 0; i < domains; ++i) {
    const auto kind = static_cast<PointwiseLoss>(rng.index(3));
    const std::size_t m = 2 + rng.index(max_support - 1);
    std::vector<ParameterVector> points;
    std::vector<double> labels;
    std::vector<double> weights;
    double total = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      points.push_back(rng.normal_vector(dim));
      if (kind == PointwiseLoss::Squared) labels.push_back(rng.normal());
      if (kind == PointwiseLoss::Logistic) labels.push_back(rng.uniform() < 0.5 ? -1.0 : 1.0);
      weights.push_back(rng.uniform(0.05, 1.0));
      total += weights.back();
    }
    double assigned = 0.0;
    for (std::size_t j = 0; j + 1 < m; ++j) {
      weights[j] /= total;
      assigned += weights[j];
    }
    weights[m - 1] = 1.0 - assigned;
    parts.push_back(std::make_shared<FiniteSupportStatLoss>(kind, std::move(points), std::move(labels),
                                                            std::move(weights), box));
  }
  std::vector<double> theta(dim);
  for (double& t : theta) t = rng.uniform(box.lower, box.upper);
  double delta = 0.0;
  switch (divergence) {
    case Divergence::KL: delta = rng.uniform(0.0, 1.0); break;
    case Divergence::TV: delta = rng.uniform(0.0, 0.6); break;
    case Divergence::W1: delta = rng.uniform(0.0, 1.0); break;
  }
  return RandomBoundInstance{MultiDomainProblem(std::move(parts)), ParameterVector(std::move(theta)),
                             divergence, delta};
}

}  // namespace dgsam
