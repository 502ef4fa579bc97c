#pragma once

#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "dgsam/objective.hpp"
#include "dgsam/problem.hpp"

namespace dgsam {

/// L(theta) = offset + b'(theta - anchor) + (theta - anchor)' H (theta - anchor) / 2
/// with H symmetric. Linear and constant losses are the H = 0 special cases.
class QuadraticObjective final : public DomainObjective {
 public:
  QuadraticObjective(Eigen::MatrixXd hessian, ParameterVector anchor_gradient,
                     ParameterVector anchor, double offset = 0.0);

  static std::shared_ptr<QuadraticObjective> linear(ParameterVector c);
  static std::shared_ptr<QuadraticObjective> constant(std::size_t dim, double value);
  /// lambda/2 * |theta|^2
  static std::shared_ptr<QuadraticObjective> isotropic(std::size_t dim, double lambda = 1.0);
  static std::shared_ptr<QuadraticObjective> diagonal(const std::vector<double>& eigenvalues);

  std::string name() const override { return "quadratic"; }
  std::size_t dimension() const override { return anchor_.size(); }
  double loss(const ParameterVector& theta) const override;
  ParameterVector gradient(const ParameterVector& theta) const override;
  bool has_analytic_hvp() const override { return true; }
  ParameterVector hessian_vector_product(const ParameterVector& theta,
                                         const ParameterVector& v) const override;
  std::optional<QuadraticModel> quadratic_model(const ParameterVector& theta) const override;

  const Eigen::MatrixXd& hessian() const { return hessian_; }
  const ParameterVector& anchor_gradient() const { return anchor_gradient_; }
  const ParameterVector& anchor() const { return anchor_; }
  double offset() const { return offset_; }

 private:
  Eigen::MatrixXd hessian_;
  ParameterVector anchor_gradient_;
  ParameterVector anchor_;
  double offset_;
};

/// Per-domain quadratics sharing one anchor: domain i has Hessian H_i and
/// gradient b_i at the anchor. With force_zero_total_gradient the b_i must
/// sum to zero (within 1e-12), which makes the anchor a critical point of L_s.
struct QuadraticDomainEnsemble {
  std::vector<Eigen::MatrixXd> hessians;
  std::vector<ParameterVector> anchor_gradients;
  ParameterVector anchor;
  bool force_zero_total_gradient = false;

  /// Throws ConfigError on asymmetric H_i, mismatched sizes, or a violated
  /// zero-total-gradient constraint.
  void validate() const;
  std::size_t domain_count() const { return hessians.size(); }
  MultiDomainProblem to_problem() const;
  /// Hessian of L_s, i.e. the mean of the H_i.
  Eigen::MatrixXd total_hessian() const;
};

/// Largest eigenvalue of a symmetric matrix (dense solver).
double max_eigenvalue(const Eigen::MatrixXd& symmetric);
double min_eigenvalue(const Eigen::MatrixXd& symmetric);

}  // namespace dgsam
