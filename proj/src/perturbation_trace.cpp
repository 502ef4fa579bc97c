#include "dgsam/perturbation_trace.hpp"

#include "dgsam/errors.hpp"
#include "dgsam/seeded_rng.hpp"

namespace dgsam {

std::vector<std::vector<double>> perturbation_trace(const MultiDomainProblem& problem,
                                                    const ParameterVector& theta, double rho,
                                                    std::size_t sweeps,
                                                    PerturbationStrategy strategy,
                                                    std::uint64_t seed,
                                                    double zero_gradient_tolerance) {
  if (!(rho >= 0.0)) throw ConfigError("perturbation trace: rho must be >= 0");
  const std::size_t s = problem.domain_count();
  const std::vector<double> base = problem.domain_losses(theta);
  std::vector<std::vector<double>> rows{std::vector<double>(s, 0.0)};
  SeededRng rng(seed);
  ParameterVector point = theta;
  for (std::size_t sweep = 0; sweep < sweeps; ++sweep) {
    const auto order = rng.permutation(s);
    for (std::size_t k = 0; k < s; ++k) {
      const ParameterVector g = strategy == PerturbationStrategy::TotalGradient
                                    ? total_gradient(problem, point)
                                    : problem.domain(order[k]).gradient(point);
      const double n = norm2(g);
      if (n > zero_gradient_tolerance) point = axpy(rho / n, g, point);
      const auto losses = problem.domain_losses(point);
      std::vector<double> row(s);
      for (std::size_t i = 0; i < s; ++i) row[i] = losses[i] - base[i];
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

}  // namespace dgsam
