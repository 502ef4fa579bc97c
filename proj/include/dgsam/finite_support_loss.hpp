#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dgsam/objective.hpp"

namespace dgsam {

enum class PointwiseLoss { Linear, Squared, Logistic };

std::string to_string(PointwiseLoss kind);
PointwiseLoss pointwise_loss_from_string(const std::string& name);

/// Constants of the bounded/Lipschitz loss assumption, valid on the
/// parameter box: |l| <= M (also an upper bound on the oscillation of l),
/// |grad_theta l| <= G, and |l(x) - l(x')| <= Lx d(x, x') on the support.
struct LossBounds {
  double M = 0.0;
  double G = 0.0;
  double Lx = 0.0;
};

/// Parameter box [lower, upper]^d on which the bound constants hold.
struct ParameterBox {
  double lower = -1.0;
  double upper = 1.0;
  bool contains(const ParameterVector& theta) const;
};

/// L_D(theta) = sum_j q_j l(theta, x_j, y_j) for a finite-support
/// distribution; the objective itself evaluates the base distribution p.
///
///   linear:   l = theta'x
///   squared:  l = (theta'x - y)^2
///   logistic: l = log(1 + exp(-y theta'x)),  y in {-1, +1}
class FiniteSupportStatLoss final : public DomainObjective {
 public:
  /// `labels` may be empty for the linear loss. When `ground_metric` is
  /// omitted the Euclidean distance between (x, y) atoms is used. When
  /// `declared` is omitted the constants are computed on `box`.
  FiniteSupportStatLoss(PointwiseLoss kind, std::vector<ParameterVector> points,
                        std::vector<double> labels, std::vector<double> probabilities,
                        ParameterBox box, std::optional<Eigen::MatrixXd> ground_metric = {},
                        std::optional<LossBounds> declared = {});

  std::string name() const override { return "finite_support_" + to_string(kind_); }
  std::size_t dimension() const override { return dim_; }
  double loss(const ParameterVector& theta) const override;
  ParameterVector gradient(const ParameterVector& theta) const override;
  bool has_analytic_hvp() const override { return true; }
  ParameterVector hessian_vector_product(const ParameterVector& theta,
                                         const ParameterVector& v) const override;
  std::optional<QuadraticModel> quadratic_model(const ParameterVector& theta) const override;

  PointwiseLoss kind() const { return kind_; }
  std::size_t support_size() const { return points_.size(); }
  const std::vector<ParameterVector>& points() const { return points_; }
  const std::vector<double>& labels() const { return labels_; }
  const std::vector<double>& probabilities() const { return probabilities_; }
  const Eigen::MatrixXd& ground_metric() const { return ground_metric_; }
  const ParameterBox& box() const { return box_; }
  const LossBounds& bounds() const { return bounds_; }
  /// Constants computed from the data on the box, regardless of any declared override.
  LossBounds computed_bounds() const;

  double pointwise(const ParameterVector& theta, std::size_t j) const;
  std::vector<double> pointwise_losses(const ParameterVector& theta) const;
  /// E_q[l(theta, .)] for an arbitrary distribution q over the support.
  double expected_loss(const ParameterVector& theta, const std::vector<double>& q) const;
  /// Same support and loss, different base distribution.
  FiniteSupportStatLoss reweighted(std::vector<double> q) const;

 private:
  double margin(const ParameterVector& theta, std::size_t j) const;

  PointwiseLoss kind_;
  std::vector<ParameterVector> points_;
  std::vector<double> labels_;
  std::vector<double> probabilities_;
  ParameterBox box_;
  Eigen::MatrixXd ground_metric_;
  LossBounds bounds_;
  std::size_t dim_ = 0;
};

/// Throws ConfigError unless q is a probability vector (sum 1 within 1e-12).
void validate_distribution(const std::vector<double>& q, const char* context);

}  // namespace dgsam
