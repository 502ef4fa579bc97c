#pragma once

#include <vector>

#include <Eigen/Dense>

#include "dgsam/problem.hpp"
#include "dgsam/uncertainty.hpp"

namespace dgsam {

struct WorstCaseResult {
  /// sup over the uncertainty set of E_q[l].
  double value = 0.0;
  std::vector<double> q;
  /// Div(q* || p) of the returned maximiser.
  double divergence = 0.0;
  /// E_p[l], the value at the centre of the set.
  double base_value = 0.0;
};

/// Exponential tilting q ~ p exp(beta l) with beta found by bisection so
/// that KL(q || p) = delta, or the point mass on the best atoms when that is
/// already inside the ball. Throws NumericError if no bracket is found.
WorstCaseResult worst_case_kl(const std::vector<double>& losses, const std::vector<double>& p,
                              double delta);
/// Moves up to delta of mass from the cheapest atoms to the most expensive one.
WorstCaseResult worst_case_tv(const std::vector<double>& losses, const std::vector<double>& p,
                              double delta);
/// Exact linear programme over transport plans with cost budget delta (m <= 16).
WorstCaseResult worst_case_w1(const std::vector<double>& losses, const std::vector<double>& p,
                              const Eigen::MatrixXd& metric, double delta);

WorstCaseResult worst_case_risk(const UncertaintySet& uset, const ParameterVector& theta);

/// Mean over domains of the per-domain worst-case risk. Every domain must be
/// a FiniteSupportStatLoss (ConfigError otherwise).
double average_worst_case_risk(const MultiDomainProblem& problem, const ParameterVector& theta,
                               Divergence kind, double delta);
std::vector<WorstCaseResult> per_domain_worst_case(const MultiDomainProblem& problem,
                                                   const ParameterVector& theta, Divergence kind,
                                                   double delta);

}  // namespace dgsam
