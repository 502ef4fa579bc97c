#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "dgsam/problem.hpp"

namespace dgsam {

/// Split of one sequential-ascent gradient g_j into its value at the
/// unperturbed point, the curvature correction along earlier perturbations,
/// and what is left over:
///   first    = grad L_j(theta)
///   second   = rho * H_j(theta) * sum_{k<j} g_k / |g_k|
///   residual = g_j - first - second
struct DecompositionStep {
  std::size_t step = 0;    // 1-based position in the order
  std::size_t domain = 0;  // domain index evaluated at this step
  double first_norm = 0.0;
  double second_norm = 0.0;
  double actual_norm = 0.0;
  double residual_norm = 0.0;
  /// residual_norm / second_norm (0 when the curvature term vanishes).
  double residual_ratio = 0.0;
  /// residual_norm / actual_norm.
  double relative_residual = 0.0;
};

/// Replays one ascent phase from theta with a seeded permutation and
/// per-domain minibatches (batch_size is ignored by analytic objectives).
std::vector<DecompositionStep> curvature_term_decomposition(const MultiDomainProblem& problem,
                                                            const ParameterVector& theta,
                                                            double rho, std::uint64_t seed,
                                                            std::size_t batch_size = 32,
                                                            double zero_gradient_tolerance = 1e-12);

}  // namespace dgsam
