#pragma once

#include <memory>
#include <vector>

#include "dgsam/finite_support_loss.hpp"
#include "dgsam/problem.hpp"
#include "dgsam/quadratic_objective.hpp"
#include "dgsam/sharpness.hpp"
#include "dgsam/uncertainty.hpp"
#include "dgsam/worst_case.hpp"

namespace dgsam {

/// Worst-case risk versus the sharpness-based upper bound at one point.
///
/// The verdict uses the Lipschitz envelope of the individual sharpness,
/// G * rho(delta) per domain, with M, G, Lx the largest constants across
/// domains. The sharpness actually measured at rho(delta) is reported next
/// to it; it can be smaller than the envelope (for example when a domain's
/// loss is identically zero), in which case the bound may fail with it.
struct BoundReport {
  Divergence divergence = Divergence::KL;
  double delta = 0.0;
  LossBounds constants;
  double rho = 0.0;

  double lhs = 0.0;         // average worst-case risk
  double total_loss = 0.0;  // L_s(theta)
  std::vector<WorstCaseResult> per_domain;

  double envelope_sharpness = 0.0;
  double rhs = 0.0;
  double slack = 0.0;
  bool pass = false;

  std::vector<double> measured_sharpness;
  double rhs_measured = 0.0;
  bool holds_with_measured_sharpness = false;
};

BoundReport check_theorem1_bound(const MultiDomainProblem& problem, const ParameterVector& theta,
                                 Divergence divergence, double delta,
                                 const SharpnessEstimatorConfig& sharpness_config = {});

/// Two domains sharing the base distribution Uniform{-1, +1} with l = theta*x
/// on the box [-1, 1], declared constants M = G = Lx = 1. Every domain loss
/// is identically zero, yet the worst case over a KL ball of radius ln 2 is |theta|.
MultiDomainProblem linear_cancellation_problem();

struct GlobalSharpnessViolation {
  double theta = 0.0;
  double delta = 0.0;
  double rho = 0.0;
  double worst_case = 0.0;
  double total_loss = 0.0;
  double global_sharpness = 0.0;
  /// worst_case - (total_loss + global_sharpness); positive means violated.
  double margin = 0.0;
};

/// Evaluates the global-sharpness bound on linear_cancellation_problem().
GlobalSharpnessViolation global_sharpness_violation(double theta, double delta);

struct Prop1Report {
  double rho = 0.0;
  double c = 0.0;
  double G = 1.0;
  QuadraticDomainEnsemble at_theta1;
  QuadraticDomainEnsemble at_theta2;
  std::vector<double> individual1;
  std::vector<double> individual2;
  double global1 = 0.0;
  double global2 = 0.0;
  double mean_individual1 = 0.0;
  double mean_individual2 = 0.0;
  bool global_ordering = false;      // global1 < global2
  bool individual_ordering = false;  // mean_individual1 > mean_individual2
};

/// Two-domain quadratic pair where global sharpness prefers theta1 while
/// mean individual sharpness prefers theta2. Requires 0 < rho <= 0.05 and
/// 0 < c < 1 (ConfigError otherwise); throws NumericError listing all four
/// sharpness values if either ordering fails by less than 1e-10.
Prop1Report build_prop1_counterexample(double rho, double c = 0.5);

/// Random finite-support problem for exercising the bound: 1 to max_domains
/// domains in dimension 1..3, each with 2..max_support atoms, a random
/// pointwise loss, box [-1, 1]; theta uniform in the box and delta drawn
/// from a divergence-dependent range.
struct RandomBoundInstance {
  MultiDomainProblem problem;
  ParameterVector theta;
  Divergence divergence;
  double delta;
};
RandomBoundInstance random_bound_instance(SeededRng& rng, Divergence divergence,
                                          std::size_t max_support = 5,
                                          std::size_t max_domains = 4);

}  // namespace dgsam
