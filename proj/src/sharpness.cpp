#include "dgsam/sharpness.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>

#include "dgsam/errors.hpp"
#include "dgsam/seeded_rng.hpp"

namespace dgsam {
namespace {

double checked_loss(const DomainObjective& objective, const ParameterVector& theta) {
  const double v = objective.loss(theta);
  if (!std::isfinite(v)) throw NumericError(objective.name() + ": non-finite loss inside the sharpness ball");
  return v;
}

ParameterVector project_to_ball(ParameterVector e, double radius) {
  const double n = norm2(e);
  if (n > radius) e *= radius / n;
  return e;
}

double grad_ascent_sharpness(const DomainObjective& objective, const ParameterVector& theta,
                             const SharpnessEstimatorConfig& config) {
  const double base = checked_loss(objective, theta);
  const double rho = config.radius;
  const double eta = config.effective_step_size();
  const std::size_t dim = theta.size();
  SeededRng rng(config.seed);

  double best = 0.0;
  const ParameterVector g0 = objective.gradient(theta);
  const double g0n = norm2(g0);
  for (std::size_t r = 0; r < config.restarts; ++r) {
    ParameterVector e = (r == 0 && g0n > 0.0) ? (rho / g0n) * g0 : rho * rng.unit_sphere(dim);
    best = std::max(best, checked_loss(objective, theta + e) - base);
    for (std::size_t k = 0; k < config.ascent_steps; ++k) {
      const ParameterVector g = objective.gradient(theta + e);
      const double n = norm2(g);
      if (!(n > 0.0)) break;
      e = project_to_ball(axpy(eta / n, g, e), rho);
      best = std::max(best, checked_loss(objective, theta + e) - base);
    }
  }
  return best;
}

double random_search_sharpness(const DomainObjective& objective, const ParameterVector& theta,
                               const SharpnessEstimatorConfig& config) {
  const double base = checked_loss(objective, theta);
  const std::size_t dim = theta.size();
  SeededRng rng(config.seed);
  double best = 0.0;
  for (std::size_t s = 0; s < config.random_samples; ++s) {
    double r = config.radius;
    // Alternate boundary samples with uniform samples from the ball interior.
    if (s % 2 == 1) r *= std::pow(rng.uniform(), 1.0 / static_cast<double>(dim));
    const ParameterVector e = r * rng.unit_sphere(dim);
    best = std::max(best, checked_loss(objective, theta + e) - base);
  }
  return best;
}

double exact_quadratic_sharpness(const DomainObjective& objective, const ParameterVector& theta,
                                 const SharpnessEstimatorConfig& config) {
  const auto model = objective.quadratic_model(theta);
  if (!model) {
    throw ConfigError("exact_quadratic sharpness needs a quadratic objective, got '" +
                      objective.name() + "'");
  }
  const auto& gv = model->gradient.data();
  const Eigen::VectorXd g = Eigen::Map<const Eigen::VectorXd>(
      gv.data(), static_cast<Eigen::Index>(gv.size()));
  return trust_region_max(g, model->hessian, config.radius).value;
}

}  // namespace

std::string to_string(SharpnessMethod method) {
  switch (method) {
    case SharpnessMethod::GradAscent: return "grad_ascent";
    case SharpnessMethod::RandomSearch: return "random_search";
    case SharpnessMethod::ExactQuadratic: return "exact_quadratic";
  }
  return "unknown";
}

SharpnessMethod sharpness_method_from_string(const std::string& name) {
  std::string lower = name;
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "grad_ascent") return SharpnessMethod::GradAscent;
  if (lower == "random_search") return SharpnessMethod::RandomSearch;
  if (lower == "exact_quadratic") return SharpnessMethod::ExactQuadratic;
  throw ConfigError("unknown sharpness method '" + name + "'");
}

double SharpnessEstimatorConfig::effective_step_size() const {
  return step_size ? *step_size : radius / static_cast<double>(std::max<std::size_t>(ascent_steps, 1));
}

void SharpnessEstimatorConfig::validate() const {
  if (!(radius > 0.0) || !std::isfinite(radius)) throw ConfigError("sharpness radius must be > 0");
  if (step_size && !(*step_size > 0.0)) throw ConfigError("sharpness step_size must be > 0");
  if (method == SharpnessMethod::GradAscent && restarts == 0) {
    throw ConfigError("sharpness restarts must be >= 1");
  }
  if (method == SharpnessMethod::RandomSearch && random_samples == 0) {
    throw ConfigError("sharpness random_samples must be >= 1");
  }
}

TrustRegionSolution trust_region_max(const Eigen::VectorXd& gradient,
                                     const Eigen::MatrixXd& hessian, double radius) {
  const Eigen::Index n = gradient.size();
  if (hessian.rows() != n || hessian.cols() != n) {
    throw DimensionError("trust_region_max: gradient/Hessian size mismatch");
  }
  if (!(radius > 0.0)) throw ConfigError("trust_region_max: radius must be > 0");

  const double gnorm = gradient.norm();
  TrustRegionSolution out{0.0, Eigen::VectorXd::Zero(n)};
  if (hessian.isZero(0.0)) {
    if (gnorm > 0.0) {
      out.step = (radius / gnorm) * gradient;
      out.value = radius * gnorm;
    }
    return out;
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(hessian);
  if (eig.info() != Eigen::Success) throw NumericError("trust_region_max: eigensolver failed");
  const Eigen::VectorXd mu = eig.eigenvalues();  // ascending
  const Eigen::MatrixXd& Q = eig.eigenvectors();
  const Eigen::VectorXd gt = Q.transpose() * gradient;
  const double mu_max = mu(n - 1);
  const double scale = std::max(1.0, mu.cwiseAbs().maxCoeff());
  const double lower = std::max(0.0, mu_max);

  auto step_at = [&](double nu) {
    Eigen::VectorXd et(n);
    for (Eigen::Index i = 0; i < n; ++i) et(i) = gt(i) / (nu - mu(i));
    return et;
  };
  auto value_of = [&](const Eigen::VectorXd& et) {
    double v = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) v += gt(i) * et(i) + 0.5 * mu(i) * et(i) * et(i);
    return v;
  };

  Eigen::VectorXd et;
  if (mu_max < 0.0 && step_at(0.0).norm() <= radius) {
    et = step_at(0.0);
  } else {
    // Hard case: the gradient has no component along the top eigenspace and
    // the remaining components do not reach the boundary at nu = mu_max.
    const double gap_tol = 1e-12 * scale;
    bool top_empty = true;
    double rest2 = 0.0;
    Eigen::VectorXd partial = Eigen::VectorXd::Zero(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      if (mu_max - mu(i) <= gap_tol) {
        if (std::abs(gt(i)) > 1e-13 * std::max(gnorm, 1e-300)) top_empty = false;
      } else {
        partial(i) = gt(i) / (lower - mu(i));
        rest2 += partial(i) * partial(i);
      }
    }
    if (mu_max >= 0.0 && (top_empty || gnorm == 0.0) && rest2 <= radius * radius) {
      et = partial;
      et(n - 1) += std::sqrt(radius * radius - rest2);
    } else {
      double lo = lower;
      double hi = lower + gnorm / radius;
      for (int it = 0; it < 400 && hi - lo > 1e-17 * std::max(1.0, hi); ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (step_at(mid).norm() > radius) {
          lo = mid;
        } else {
          hi = mid;
        }
      }
      et = step_at(hi);
    }
  }
  const double v = value_of(et);
  if (v > 0.0) {
    out.value = v;
    out.step = Q * et;
  }
  return out;
}

double zeroth_order_sharpness(const DomainObjective& objective, const ParameterVector& theta,
                              const SharpnessEstimatorConfig& config) {
  config.validate();
  if (theta.size() != objective.dimension()) {
    throw DimensionError("zeroth_order_sharpness: dimension mismatch");
  }
  switch (config.method) {
    case SharpnessMethod::GradAscent: return grad_ascent_sharpness(objective, theta, config);
    case SharpnessMethod::RandomSearch: return random_search_sharpness(objective, theta, config);
    case SharpnessMethod::ExactQuadratic: return exact_quadratic_sharpness(objective, theta, config);
  }
  throw ConfigError("unknown sharpness method");
}

SharpnessReport sharpness_report(const MultiDomainProblem& problem, const ParameterVector& theta,
                                 const SharpnessEstimatorConfig& config) {
  SharpnessReport report;
  report.config = config;
  for (const auto& d : problem.domains()) {
    report.per_domain.push_back(zeroth_order_sharpness(*d, theta, config));
  }
  report.global = zeroth_order_sharpness(*AveragedObjective::of(problem), theta, config);
  double sum = 0.0;
  for (double v : report.per_domain) sum += v;
  report.mean = sum / static_cast<double>(report.per_domain.size());
  double var = 0.0;
  for (double v : report.per_domain) var += (v - report.mean) * (v - report.mean);
  report.std = std::sqrt(var / static_cast<double>(report.per_domain.size()));
  for (const auto& d : problem.unseen_domains()) {
    report.unseen.push_back(zeroth_order_sharpness(*d, theta, config));
  }
  return report;
}

}  // namespace dgsam
