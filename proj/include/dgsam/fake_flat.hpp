#pragma once

#include <array>
#include <memory>

#include <Eigen/Dense>

#include "dgsam/objective.hpp"
#include "dgsam/problem.hpp"

namespace dgsam {

/// Two-domain toy landscape on R^2 with a genuinely flat minimum R1 and a
/// fake-flat minimum R2.
///
///   V(t) = -A1 exp(-|t-c1|^2 / 2 s1^2) - A2 exp(-|t-c2|^2 / 2 s2^2)
///   w(t) = (t_x - c2_x) exp(-|t-c2|^2 / 2 sw^2)
///   L_1 = V - k w,  L_2 = V + k w
///
/// The slope terms cancel in the mean, so L_s == V exactly, while each domain
/// has gradient magnitude ~k at c2.
struct FakeFlatParams {
  double depth1 = 1.0;
  double depth2 = 1.0;
  double width1 = 0.8;
  double width2 = 0.8;
  double slope_width = 0.4;
  double slope_scale = 5.0;
  std::array<double, 2> center1{-2.0, 0.0};
  std::array<double, 2> center2{2.0, 0.0};

  void validate() const;
};

/// Closed-form pieces of the landscape.
double shared_well(const FakeFlatParams& p, const ParameterVector& t);
ParameterVector shared_well_gradient(const FakeFlatParams& p, const ParameterVector& t);
Eigen::Matrix2d shared_well_hessian(const FakeFlatParams& p, const ParameterVector& t);
double slope(const FakeFlatParams& p, const ParameterVector& t);
ParameterVector slope_gradient(const FakeFlatParams& p, const ParameterVector& t);
Eigen::Matrix2d slope_hessian(const FakeFlatParams& p, const ParameterVector& t);

class FakeFlatLandscape {
 public:
  /// Throws ConfigError on invalid parameters and NumericError when the
  /// Newton refinement of either minimum does not reach |grad V| <= 1e-8.
  explicit FakeFlatLandscape(FakeFlatParams params = {});

  const FakeFlatParams& params() const { return params_; }
  const MultiDomainProblem& problem() const { return problem_; }
  /// Refined critical points of V near c1 and c2.
  const ParameterVector& flat_minimum() const { return flat_minimum_; }
  const ParameterVector& fake_flat_minimum() const { return fake_flat_minimum_; }

  double shared_well(const ParameterVector& t) const { return dgsam::shared_well(params_, t); }
  double slope(const ParameterVector& t) const { return dgsam::slope(params_, t); }

 private:

  FakeFlatParams params_;
  ParameterVector flat_minimum_;
  ParameterVector fake_flat_minimum_;
  MultiDomainProblem problem_;
};

FakeFlatLandscape build_fake_flat(const FakeFlatParams& params = {});

}  // namespace dgsam
