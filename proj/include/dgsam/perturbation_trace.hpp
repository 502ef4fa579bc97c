#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "dgsam/problem.hpp"

namespace dgsam {

enum class PerturbationStrategy {
  /// Every step moves rho along the normalised total-loss gradient.
  TotalGradient,
  /// Every step moves rho along one domain's normalised gradient, cycling
  /// through a seeded random order once per sweep.
  Sequential,
};

/// Row k holds L_i(theta_k) - L_i(theta_0) for every domain after k
/// cumulative perturbations; row 0 is all zeros. Runs sweeps * S steps.
std::vector<std::vector<double>> perturbation_trace(const MultiDomainProblem& problem,
                                                    const ParameterVector& theta, double rho,
                                                    std::size_t sweeps,
                                                    PerturbationStrategy strategy,
                                                    std::uint64_t seed,
                                                    double zero_gradient_tolerance = 1e-12);

}  // namespace dgsam
