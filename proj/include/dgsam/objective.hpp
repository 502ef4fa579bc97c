#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dgsam/parameter_vector.hpp"
#include "dgsam/seeded_rng.hpp"

namespace dgsam {

/// Exact second-order description of an objective that is a quadratic
/// function of the parameters: L(theta + e) = value + gradient.e + e'He/2.
struct QuadraticModel {
  double value = 0.0;
  ParameterVector gradient;
  Eigen::MatrixXd hessian;
};

class DomainObjective;
using ObjectivePtr = std::shared_ptr<const DomainObjective>;

/// Result of a per-domain minibatch draw. Analytic objectives hand back
/// themselves with `deterministic == true` and no indices.
struct MinibatchObjective {
  ObjectivePtr objective;
  bool deterministic = true;
  std::vector<std::size_t> indices;
};

/// One domain's differentiable loss L_i over a shared parameter space.
///
/// Implementations are immutable after construction and safe to evaluate
/// concurrently. Objects must be owned by a std::shared_ptr (minibatch
/// sampling of analytic objectives returns shared_from_this()).
class DomainObjective : public std::enable_shared_from_this<DomainObjective> {
 public:
  virtual ~DomainObjective() = default;

  virtual std::string name() const = 0;
  virtual std::size_t dimension() const = 0;
  virtual double loss(const ParameterVector& theta) const = 0;
  virtual ParameterVector gradient(const ParameterVector& theta) const = 0;

  virtual bool has_analytic_hvp() const { return false; }
  /// Hessian-vector product. The default is a central difference of
  /// gradient() with step 1e-5 * (1 + |theta|_inf) / |v|.
  virtual ParameterVector hessian_vector_product(const ParameterVector& theta,
                                                 const ParameterVector& v) const;

  /// Present only when the loss is exactly quadratic in theta.
  virtual std::optional<QuadraticModel> quadratic_model(const ParameterVector& theta) const;

  /// Number of samples backing the objective, 0 for analytic losses.
  virtual std::size_t sample_count() const { return 0; }
  /// Uniform-without-replacement minibatch of the backing data. Analytic
  /// objectives ignore batch_size and return themselves.
  virtual MinibatchObjective sample_minibatch(SeededRng& rng, std::size_t batch_size) const;

 protected:
  void require_dimension(const ParameterVector& theta) const;
};

/// Free-function form of DomainObjective::sample_minibatch.
MinibatchObjective sample_domain_minibatch(const DomainObjective& objective, SeededRng& rng,
                                           std::size_t batch_size);

}  // namespace dgsam
