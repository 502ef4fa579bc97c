#include "dgsam/curvature_decomposition.hpp"

#include "dgsam/errors.hpp"
#include "dgsam/seeded_rng.hpp"

namespace dgsam {

std::vector<DecompositionStep> curvature_term_decomposition(const MultiDomainProblem& problem,
                                                            const ParameterVector& theta,
                                                            double rho, std::uint64_t seed,
                                                            std::size_t batch_size,
                                                            double zero_gradient_tolerance) {
  if (!(rho >= 0.0)) throw ConfigError("decomposition: rho must be >= 0");
  if (theta.size() != problem.dimension()) throw DimensionError("decomposition: dimension mismatch");
  SeededRng rng(seed);
  const std::size_t s = problem.domain_count();
  const auto order = rng.permutation(s);
  std::vector<ObjectivePtr> batches;
  for (std::size_t i = 0; i < s; ++i) {
    batches.push_back(sample_domain_minibatch(problem.domain(i), rng, batch_size).objective);
  }

  std::vector<DecompositionStep> out;
  ParameterVector point = theta;
  ParameterVector direction_sum = ParameterVector::zeros(theta.size());
  for (std::size_t j = 0; j < s; ++j) {
    const DomainObjective& obj = *batches[order[j]];
    const ParameterVector g = obj.gradient(point);
    const ParameterVector first = obj.gradient(theta);
    const ParameterVector second =
        rho * obj.hessian_vector_product(theta, direction_sum);
    const ParameterVector residual = g - first - second;

    DecompositionStep row;
    row.step = j + 1;
    row.domain = order[j];
    row.first_norm = norm2(first);
    row.second_norm = norm2(second);
    row.actual_norm = norm2(g);
    row.residual_norm = norm2(residual);
    row.residual_ratio = row.second_norm > 0.0 ? row.residual_norm / row.second_norm : 0.0;
    row.relative_residual = row.actual_norm > 0.0 ? row.residual_norm / row.actual_norm : 0.0;
    out.push_back(row);

    const double n = norm2(g);
    if (n > zero_gradient_tolerance) {
      const ParameterVector unit = (1.0 / n) * g;
      direction_sum += unit;
      point = axpy(rho, unit, point);
    }
  }
  return out;
}

}  // namespace dgsam
