#include "dgsam/objective.hpp"

#include <string>

#include "dgsam/errors.hpp"
#include "dgsam/finite_difference.hpp"

namespace dgsam {

void DomainObjective::require_dimension(const ParameterVector& theta) const {
  if (theta.size() != dimension()) {
    throw DimensionError(name() + ": expected dimension " + std::to_string(dimension()) +
                         ", got " + std::to_string(theta.size()));
  }
}

ParameterVector DomainObjective::hessian_vector_product(const ParameterVector& theta,
                                                        const ParameterVector& v) const {
  require_dimension(theta);
  require_same_dimension(theta, v, "hessian_vector_product");
  const double vnorm = norm2(v);
  if (vnorm == 0.0) return ParameterVector::zeros(v.size());
  const double h = default_fd_step(theta) / vnorm;
  return finite_diff_hvp([this](const ParameterVector& t) { return gradient(t); }, theta, v, h);
}

std::optional<QuadraticModel> DomainObjective::quadratic_model(const ParameterVector&) const {
  return std::nullopt;
}

MinibatchObjective DomainObjective::sample_minibatch(SeededRng&, std::size_t batch_size) const {
  if (batch_size == 0) throw ConfigError(name() + ": batch_size must be >= 1");
  return MinibatchObjective{shared_from_this(), true, {}};
}

MinibatchObjective sample_domain_minibatch(const DomainObjective& objective, SeededRng& rng,
                                           std::size_t batch_size) {
  return objective.sample_minibatch(rng, batch_size);
}

}  // namespace dgsam
