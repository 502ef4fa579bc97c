#include "dgsam/problem.hpp"

#include <cmath>
#include <string>

#include "dgsam/errors.hpp"

namespace dgsam {

MultiDomainProblem::MultiDomainProblem(std::vector<ObjectivePtr> domains,
                                       std::vector<ObjectivePtr> unseen)
    : domains_(std::move(domains)), unseen_(std::move(unseen)) {
  if (domains_.empty()) throw ConfigError("MultiDomainProblem: need at least one domain");
  for (const auto& d : domains_) {
    if (!d) throw ConfigError("MultiDomainProblem: null domain");
  }
  dimension_ = domains_.front()->dimension();
  auto check = [this](const std::vector<ObjectivePtr>& list) {
    for (const auto& d : list) {
      if (!d) throw ConfigError("MultiDomainProblem: null domain");
      if (d->dimension() != dimension_) {
        throw DimensionError("MultiDomainProblem: domain '" + d->name() +
                             "' has a different dimension");
      }
    }
  };
  check(domains_);
  check(unseen_);
}

std::vector<double> MultiDomainProblem::domain_losses(const ParameterVector& theta) const {
  std::vector<double> out;
  out.reserve(domains_.size());
  for (std::size_t i = 0; i < domains_.size(); ++i) {
    const double v = domains_[i]->loss(theta);
    if (!std::isfinite(v)) {
      throw NumericError("non-finite loss in domain " + std::to_string(i));
    }
    out.push_back(v);
  }
  return out;
}

double total_loss(const MultiDomainProblem& problem, const ParameterVector& theta) {
  double sum = 0.0;
  for (double v : problem.domain_losses(theta)) sum += v;
  return sum / static_cast<double>(problem.domain_count());
}

ParameterVector total_gradient(const MultiDomainProblem& problem, const ParameterVector& theta) {
  ParameterVector sum = ParameterVector::zeros(problem.dimension());
  for (std::size_t i = 0; i < problem.domain_count(); ++i) {
    try {
      sum += problem.domain(i).gradient(theta);
    } catch (const NumericError& e) {
      throw NumericError("non-finite gradient in domain " + std::to_string(i) + ": " + e.what());
    }
  }
  return (1.0 / static_cast<double>(problem.domain_count())) * sum;
}

AveragedObjective::AveragedObjective(std::vector<ObjectivePtr> parts) : parts_(std::move(parts)) {
  if (parts_.empty()) throw ConfigError("AveragedObjective: no parts");
  dimension_ = parts_.front()->dimension();
  for (const auto& p : parts_) {
    if (p->dimension() != dimension_) throw DimensionError("AveragedObjective: dimension mismatch");
  }
}

ObjectivePtr AveragedObjective::of(const MultiDomainProblem& problem) {
  return std::make_shared<AveragedObjective>(problem.domains());
}

double AveragedObjective::loss(const ParameterVector& theta) const {
  double sum = 0.0;
  for (const auto& p : parts_) sum += p->loss(theta);
  return sum / static_cast<double>(parts_.size());
}

ParameterVector AveragedObjective::gradient(const ParameterVector& theta) const {
  ParameterVector sum = ParameterVector::zeros(dimension_);
  for (const auto& p : parts_) sum += p->gradient(theta);
  return (1.0 / static_cast<double>(parts_.size())) * sum;
}

bool AveragedObjective::has_analytic_hvp() const {
  for (const auto& p : parts_) {
    if (!p->has_analytic_hvp()) return false;
  }
  return true;
}

ParameterVector AveragedObjective::hessian_vector_product(const ParameterVector& theta,
                                                          const ParameterVector& v) const {
  ParameterVector sum = ParameterVector::zeros(dimension_);
  for (const auto& p : parts_) sum += p->hessian_vector_product(theta, v);
  return (1.0 / static_cast<double>(parts_.size())) * sum;
}

std::optional<QuadraticModel> AveragedObjective::quadratic_model(
    const ParameterVector& theta) const {
  QuadraticModel out{0.0, ParameterVector::zeros(dimension_),
                     Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dimension_),
                                           static_cast<Eigen::Index>(dimension_))};
  for (const auto& p : parts_) {
    auto m = p->quadratic_model(theta);
    if (!m) return std::nullopt;
    out.value += m->value;
    out.gradient += m->gradient;
    out.hessian += m->hessian;
  }
  const double inv = 1.0 / static_cast<double>(parts_.size());
  out.value *= inv;
  out.gradient *= inv;
  out.hessian *= inv;
  return out;
}

}  // namespace dgsam
