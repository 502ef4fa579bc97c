#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dgsam/objective.hpp"
#include "dgsam/problem.hpp"

namespace dgsam {

enum class SharpnessMethod { GradAscent, RandomSearch, ExactQuadratic };

std::string to_string(SharpnessMethod method);
/// Accepts "grad_ascent", "random_search", "exact_quadratic" (case-insensitive).
SharpnessMethod sharpness_method_from_string(const std::string& name);

/// Settings of the inner maximisation max_{|e| <= radius} L(theta + e) - L(theta).
struct SharpnessEstimatorConfig {
  double radius = 0.05;
  SharpnessMethod method = SharpnessMethod::GradAscent;
  std::size_t ascent_steps = 20;
  /// Defaults to radius / ascent_steps.
  std::optional<double> step_size;
  std::size_t restarts = 8;
  std::size_t random_samples = 4096;
  std::uint64_t seed = 0;

  double effective_step_size() const;
  void validate() const;
};

/// max_{|e| <= radius} g'e + e'He/2 for symmetric H, solved exactly in the
/// eigenbasis of H (including the degenerate "hard case"). Returns the
/// maximiser together with the attained value.
struct TrustRegionSolution {
  double value = 0.0;
  Eigen::VectorXd step;
};
TrustRegionSolution trust_region_max(const Eigen::VectorXd& gradient,
                                     const Eigen::MatrixXd& hessian, double radius);

/// Zeroth-order sharpness of one objective. Always >= 0 since e = 0 is
/// feasible. The search methods return a lower bound on the true maximum;
/// ExactQuadratic requires objective.quadratic_model() and throws
/// ConfigError otherwise.
double zeroth_order_sharpness(const DomainObjective& objective, const ParameterVector& theta,
                              const SharpnessEstimatorConfig& config);

struct SharpnessReport {
  std::vector<double> per_domain;
  double global = 0.0;
  double mean = 0.0;
  /// Population standard deviation of per_domain.
  double std = 0.0;
  /// One entry per held-out domain of the problem (empty when there are none).
  std::vector<double> unseen;
  SharpnessEstimatorConfig config;
};

SharpnessReport sharpness_report(const MultiDomainProblem& problem, const ParameterVector& theta,
                                 const SharpnessEstimatorConfig& config);

}  // namespace dgsam
