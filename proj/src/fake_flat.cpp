#include "dgsam/fake_flat.hpp"

#include <cmath>
#include <string>

#include "dgsam/errors.hpp"

namespace dgsam {
namespace {

struct Gaussian {
  double value;
  Eigen::Vector2d offset;
};

Gaussian gaussian(const ParameterVector& t, const std::array<double, 2>& c, double width) {
  const Eigen::Vector2d off(t[0] - c[0], t[1] - c[1]);
  return {std::exp(-off.squaredNorm() / (2.0 * width * width)), off};
}

ParameterVector to_param(const Eigen::Vector2d& v) { return ParameterVector{v.x(), v.y()}; }

/// One domain of the landscape: V + sign * k * w.
class FakeFlatDomain final : public DomainObjective {
 public:
  FakeFlatDomain(const FakeFlatParams& params, double sign) : params_(params), sign_(sign) {}

  std::string name() const override { return sign_ < 0 ? "fake_flat_1" : "fake_flat_2"; }
  std::size_t dimension() const override { return 2; }

  double loss(const ParameterVector& t) const override {
    require_dimension(t);
    return shared_well(params_, t) + sign_ * params_.slope_scale * slope(params_, t);
  }

  ParameterVector gradient(const ParameterVector& t) const override {
    require_dimension(t);
    return axpy(sign_ * params_.slope_scale, slope_gradient(params_, t),
                shared_well_gradient(params_, t));
  }

  bool has_analytic_hvp() const override { return true; }

  ParameterVector hessian_vector_product(const ParameterVector& t,
                                         const ParameterVector& v) const override {
    require_dimension(t);
    require_same_dimension(t, v, "FakeFlatDomain::hessian_vector_product");
    const Eigen::Matrix2d h =
        shared_well_hessian(params_, t) + sign_ * params_.slope_scale * slope_hessian(params_, t);
    return to_param(h * Eigen::Vector2d(v[0], v[1]));
  }

 private:
  FakeFlatParams params_;
  double sign_;
};

}  // namespace

void FakeFlatParams::validate() const {
  if (!(depth1 > 0 && depth2 > 0 && width1 > 0 && width2 > 0 && slope_width > 0 &&
        slope_scale > 0)) {
    throw ConfigError("fake_flat: depths, widths and slope scale must be positive");
  }
  if (center1 == center2) throw ConfigError("fake_flat: well centers must differ");
}

double shared_well(const FakeFlatParams& p, const ParameterVector& t) {
  const auto g1 = gaussian(t, p.center1, p.width1);
  const auto g2 = gaussian(t, p.center2, p.width2);
  return -p.depth1 * g1.value - p.depth2 * g2.value;
}

ParameterVector shared_well_gradient(const FakeFlatParams& p, const ParameterVector& t) {
  const auto g1 = gaussian(t, p.center1, p.width1);
  const auto g2 = gaussian(t, p.center2, p.width2);
  const Eigen::Vector2d grad =
      p.depth1 * g1.value / (p.width1 * p.width1) * g1.offset +
      p.depth2 * g2.value / (p.width2 * p.width2) * g2.offset;
  return to_param(grad);
}

Eigen::Matrix2d shared_well_hessian(const FakeFlatParams& p, const ParameterVector& t) {
  auto well = [&](double depth, double width, const std::array<double, 2>& c) {
    const auto g = gaussian(t, c, width);
    const double s2 = width * width;
    // d2/dt2 of -A exp(-|o|^2/2s^2) = A e / s^2 (I - o o' / s^2)
    return Eigen::Matrix2d(depth * g.value / s2 *
                           (Eigen::Matrix2d::Identity() - g.offset * g.offset.transpose() / s2));
  };
  return well(p.depth1, p.width1, p.center1) +
         well(p.depth2, p.width2, p.center2);
}

double slope(const FakeFlatParams& p, const ParameterVector& t) {
  const auto g = gaussian(t, p.center2, p.slope_width);
  return g.offset.x() * g.value;
}

ParameterVector slope_gradient(const FakeFlatParams& p, const ParameterVector& t) {
  const auto g = gaussian(t, p.center2, p.slope_width);
  const double s2 = p.slope_width * p.slope_width;
  const double u = g.offset.x();
  const double v = g.offset.y();
  return ParameterVector{g.value * (1.0 - u * u / s2), -g.value * u * v / s2};
}

Eigen::Matrix2d slope_hessian(const FakeFlatParams& p, const ParameterVector& t) {
  const auto g = gaussian(t, p.center2, p.slope_width);
  const double s2 = p.slope_width * p.slope_width;
  const double u = g.offset.x();
  const double v = g.offset.y();
  const double e = g.value;
  Eigen::Matrix2d h;
  h(0, 0) = e * (u * u * u / (s2 * s2) - 3.0 * u / s2);
  h(0, 1) = e * (u * u * v / (s2 * s2) - v / s2);
  h(1, 0) = h(0, 1);
  h(1, 1) = e * (u * v * v / (s2 * s2) - u / s2);
  return h;
}

namespace {

ParameterVector refine_minimum(const FakeFlatParams& params, const std::array<double, 2>& start) {
  ParameterVector t{start[0], start[1]};
  for (int iter = 0; iter < 100; ++iter) {
    const ParameterVector g = shared_well_gradient(params, t);
    if (norm2(g) <= 1e-12) break;
    const Eigen::Matrix2d h = shared_well_hessian(params, t);
    Eigen::Vector2d step = h.ldlt().solve(Eigen::Vector2d(g[0], g[1]));
    if (!step.allFinite() || h.determinant() <= 0.0) {
      step = Eigen::Vector2d(g[0], g[1]);  // plain descent outside the convex core
    }
    t = ParameterVector{t[0] - step.x(), t[1] - step.y()};
  }
  const double residual = norm2(shared_well_gradient(params, t));
  if (!(residual <= 1e-8)) {
    throw NumericError("fake_flat: minimum refinement stalled with |grad V| = " +
                       std::to_string(residual));
  }
  return t;
}

}  // namespace

FakeFlatLandscape::FakeFlatLandscape(FakeFlatParams params)
    : params_((params.validate(), params)),
      flat_minimum_(refine_minimum(params_, params_.center1)),
      fake_flat_minimum_(refine_minimum(params_, params_.center2)),
      problem_({std::make_shared<FakeFlatDomain>(params_, -1.0),
                std::make_shared<FakeFlatDomain>(params_, +1.0)}) {}

FakeFlatLandscape build_fake_flat(const FakeFlatParams& params) {
  return FakeFlatLandscape(params);
}

}  // namespace dgsam
