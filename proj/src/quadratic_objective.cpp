#include "dgsam/quadratic_objective.hpp"

#include <cmath>
#include <string>

#include "dgsam/errors.hpp"

namespace dgsam {
namespace {

Eigen::Map<const Eigen::VectorXd> as_eigen(const ParameterVector& v) {
  return {v.data().data(), static_cast<Eigen::Index>(v.size())};
}

ParameterVector from_eigen(const Eigen::VectorXd& v) {
  return ParameterVector(std::vector<double>(v.data(), v.data() + v.size()));
}

}  // namespace

QuadraticObjective::QuadraticObjective(Eigen::MatrixXd hessian, ParameterVector anchor_gradient,
                                       ParameterVector anchor, double offset)
    : hessian_(std::move(hessian)),
      anchor_gradient_(std::move(anchor_gradient)),
      anchor_(std::move(anchor)),
      offset_(offset) {
  const auto d = static_cast<Eigen::Index>(anchor_.size());
  if (d == 0) throw ConfigError("QuadraticObjective: empty parameter space");
  if (hessian_.rows() != d || hessian_.cols() != d ||
      anchor_gradient_.size() != anchor_.size()) {
    throw DimensionError("QuadraticObjective: inconsistent dimensions");
  }
  if (!hessian_.allFinite() || !std::isfinite(offset_)) {
    throw ConfigError("QuadraticObjective: non-finite coefficients");
  }
  const double asym = (hessian_ - hessian_.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-12 * std::max(1.0, hessian_.cwiseAbs().maxCoeff())) {
    throw ConfigError("QuadraticObjective: Hessian is not symmetric");
  }
}

std::shared_ptr<QuadraticObjective> QuadraticObjective::linear(ParameterVector c) {
  const std::size_t dim = c.size();
  const auto d = static_cast<Eigen::Index>(dim);
  return std::make_shared<QuadraticObjective>(Eigen::MatrixXd::Zero(d, d), std::move(c),
                                              ParameterVector::zeros(dim));
}

std::shared_ptr<QuadraticObjective> QuadraticObjective::constant(std::size_t dim, double value) {
  const auto d = static_cast<Eigen::Index>(dim);
  return std::make_shared<QuadraticObjective>(Eigen::MatrixXd::Zero(d, d),
                                              ParameterVector::zeros(dim),
                                              ParameterVector::zeros(dim), value);
}

std::shared_ptr<QuadraticObjective> QuadraticObjective::isotropic(std::size_t dim, double lambda) {
  const auto d = static_cast<Eigen::Index>(dim);
  return std::make_shared<QuadraticObjective>(lambda * Eigen::MatrixXd::Identity(d, d),
                                              ParameterVector::zeros(dim),
                                              ParameterVector::zeros(dim));
}

std::shared_ptr<QuadraticObjective> QuadraticObjective::diagonal(
    const std::vector<double>& eigenvalues) {
  const auto d = static_cast<Eigen::Index>(eigenvalues.size());
  Eigen::VectorXd diag = Eigen::Map<const Eigen::VectorXd>(eigenvalues.data(), d);
  return std::make_shared<QuadraticObjective>(Eigen::MatrixXd(diag.asDiagonal()),
                                              ParameterVector::zeros(eigenvalues.size()),
                                              ParameterVector::zeros(eigenvalues.size()));
}

double QuadraticObjective::loss(const ParameterVector& theta) const {
  require_dimension(theta);
  const Eigen::VectorXd delta = as_eigen(theta) - as_eigen(anchor_);
  return offset_ + as_eigen(anchor_gradient_).dot(delta) + 0.5 * delta.dot(hessian_ * delta);
}

ParameterVector QuadraticObjective::gradient(const ParameterVector& theta) const {
  require_dimension(theta);
  const Eigen::VectorXd delta = as_eigen(theta) - as_eigen(anchor_);
  return from_eigen(as_eigen(anchor_gradient_) + hessian_ * delta);
}

ParameterVector QuadraticObjective::hessian_vector_product(const ParameterVector& theta,
                                                           const ParameterVector& v) const {
  require_dimension(theta);
  require_same_dimension(theta, v, "QuadraticObjective::hessian_vector_product");
  return from_eigen(hessian_ * as_eigen(v));
}

std::optional<QuadraticModel> QuadraticObjective::quadratic_model(
    const ParameterVector& theta) const {
  return QuadraticModel{loss(theta), gradient(theta), hessian_};
}

void QuadraticDomainEnsemble::validate() const {
  if (hessians.empty()) throw ConfigError("QuadraticDomainEnsemble: no domains");
  if (hessians.size() != anchor_gradients.size()) {
    throw ConfigError("QuadraticDomainEnsemble: hessian/gradient count mismatch");
  }
  const auto d = static_cast<Eigen::Index>(anchor.size());
  ParameterVector sum = ParameterVector::zeros(anchor.size());
  for (std::size_t i = 0; i < hessians.size(); ++i) {
    const auto& h = hessians[i];
    if (h.rows() != d || h.cols() != d || anchor_gradients[i].size() != anchor.size()) {
      throw ConfigError("QuadraticDomainEnsemble: domain " + std::to_string(i) +
                        " has wrong dimensions");
    }
    if ((h - h.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, h.cwiseAbs().maxCoeff())) {
      throw ConfigError("QuadraticDomainEnsemble: H_" + std::to_string(i) + " is not symmetric");
    }
    sum += anchor_gradients[i];
  }
  if (force_zero_total_gradient && norm_inf(sum) > 1e-12) {
    throw ConfigError("QuadraticDomainEnsemble: domain gradients do not sum to zero");
  }
}

MultiDomainProblem QuadraticDomainEnsemble::to_problem() const {
  validate();
  std::vector<ObjectivePtr> domains;
  for (std::size_t i = 0; i < hessians.size(); ++i) {
    domains.push_back(
        std::make_shared<QuadraticObjective>(hessians[i], anchor_gradients[i], anchor));
  }
  return MultiDomainProblem(std::move(domains));
}

Eigen::MatrixXd QuadraticDomainEnsemble::total_hessian() const {
  Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(hessians.front().rows(), hessians.front().cols());
  for (const auto& h : hessians) sum += h;
  return sum / static_cast<double>(hessians.size());
}

double max_eigenvalue(const Eigen::MatrixXd& symmetric) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(symmetric, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().maxCoeff();
}

double min_eigenvalue(const Eigen::MatrixXd& symmetric) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(symmetric, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

}  // namespace dgsam
