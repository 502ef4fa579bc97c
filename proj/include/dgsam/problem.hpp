#pragma once

#include <cstddef>
#include <vector>

#include "dgsam/objective.hpp"

namespace dgsam {

/// S source-domain objectives over one parameter space, plus optional
/// held-out domains that are never trained on and only appear in reports.
class MultiDomainProblem {
 public:
  explicit MultiDomainProblem(std::vector<ObjectivePtr> domains,
                              std::vector<ObjectivePtr> unseen = {});

  std::size_t domain_count() const { return domains_.size(); }
  std::size_t dimension() const { return dimension_; }
  const DomainObjective& domain(std::size_t i) const { return *domains_.at(i); }
  const ObjectivePtr& domain_ptr(std::size_t i) const { return domains_.at(i); }
  const std::vector<ObjectivePtr>& domains() const { return domains_; }
  const std::vector<ObjectivePtr>& unseen_domains() const { return unseen_; }

  /// Per-domain losses; throws NumericError naming the first non-finite one.
  std::vector<double> domain_losses(const ParameterVector& theta) const;

 private:
  std::vector<ObjectivePtr> domains_;
  std::vector<ObjectivePtr> unseen_;
  std::size_t dimension_ = 0;
};

/// L_s(theta): arithmetic mean of the domain losses, summed left to right.
double total_loss(const MultiDomainProblem& problem, const ParameterVector& theta);
/// Mean of the domain gradients, summed left to right.
ParameterVector total_gradient(const MultiDomainProblem& problem, const ParameterVector& theta);

/// Presents L_s as a single objective (used by the sharpness estimators).
class AveragedObjective final : public DomainObjective {
 public:
  explicit AveragedObjective(std::vector<ObjectivePtr> parts);
  static ObjectivePtr of(const MultiDomainProblem& problem);

  std::string name() const override { return "average"; }
  std::size_t dimension() const override { return dimension_; }
  double loss(const ParameterVector& theta) const override;
  ParameterVector gradient(const ParameterVector& theta) const override;
  bool has_analytic_hvp() const override;
  ParameterVector hessian_vector_product(const ParameterVector& theta,
                                         const ParameterVector& v) const override;
  std::optional<QuadraticModel> quadratic_model(const ParameterVector& theta) const override;

 private:
  std::vector<ObjectivePtr> parts_;
  std::size_t dimension_ = 0;
};

}  // namespace dgsam
