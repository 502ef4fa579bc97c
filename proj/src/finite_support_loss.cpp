#include "dgsam/finite_support_loss.hpp"

#include <algorithm>
#include <cmath>

#include "dgsam/errors.hpp"

namespace dgsam {
namespace {

double softplus(double z) { return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }
double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

/// max and min of a'theta over the box.
std::pair<double, double> linear_range(const ParameterVector& a, const ParameterBox& box) {
  double hi = 0.0;
  double lo = 0.0;
  for (double c : a.values()) {
    hi += std::max(c * box.lower, c * box.upper);
    lo += std::min(c * box.lower, c * box.upper);
  }
  return {lo, hi};
}

double max_abs_over_box(const ParameterVector& a, const ParameterBox& box) {
  const auto [lo, hi] = linear_range(a, box);
  return std::max(std::abs(lo), std::abs(hi));
}

}  // namespace

std::string to_string(PointwiseLoss kind) {
  switch (kind) {
    case PointwiseLoss::Linear: return "linear";
    case PointwiseLoss::Squared: return "squared";
    case PointwiseLoss::Logistic: return "logistic";
  }
  return "unknown";
}

PointwiseLoss pointwise_loss_from_string(const std::string& name) {
  if (name == "linear") return PointwiseLoss::Linear;
  if (name == "squared") return PointwiseLoss::Squared;
  if (name == "logistic") return PointwiseLoss::Logistic;
  throw ConfigError("unknown pointwise loss '" + name + "'");
}

bool ParameterBox::contains(const ParameterVector& theta) const {
  return std::all_of(theta.values().begin(), theta.values().end(),
                     [this](double v) { return v >= lower && v <= upper; });
}

void validate_distribution(const std::vector<double>& q, const char* context) {
  double sum = 0.0;
  for (double v : q) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw ConfigError(std::string(context) + ": probabilities must be finite and >= 0");
    }
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-12) {
    throw ConfigError(std::string(context) + ": probabilities must sum to 1");
  }
}

FiniteSupportStatLoss::FiniteSupportStatLoss(PointwiseLoss kind, std::vector<ParameterVector> points,
                                             std::vector<double> labels,
                                             std::vector<double> probabilities, ParameterBox box,
                                             std::optional<Eigen::MatrixXd> ground_metric,
                                             std::optional<LossBounds> declared)
    : kind_(kind),
      points_(std::move(points)),
      labels_(std::move(labels)),
      probabilities_(std::move(probabilities)),
      box_(box) {
  if (points_.empty()) throw ConfigError("FiniteSupportStatLoss: empty support");
  if (!(box_.lower < box_.upper)) throw ConfigError("FiniteSupportStatLoss: empty parameter box");
  dim_ = points_.front().size();
  for (const auto& x : points_) {
    if (x.size() != dim_) throw DimensionError("FiniteSupportStatLoss: ragged support points");
  }
  if (probabilities_.size() != points_.size()) {
    throw ConfigError("FiniteSupportStatLoss: one probability per support point required");
  }
  validate_distribution(probabilities_, "FiniteSupportStatLoss");
  if (kind_ == PointwiseLoss::Linear) {
    if (labels_.empty()) labels_.assign(points_.size(), 0.0);
  }
  if (labels_.size() != points_.size()) {
    throw ConfigError("FiniteSupportStatLoss: one label per support point required");
  }
  if (kind_ == PointwiseLoss::Logistic) {
    for (double y : labels_) {
      if (y != 1.0 && y != -1.0) throw ConfigError("logistic loss needs labels in {-1, +1}");
    }
  }
  const auto m = static_cast<Eigen::Index>(points_.size());
  if (ground_metric) {
    if (ground_metric->rows() != m || ground_metric->cols() != m) {
      throw DimensionError("FiniteSupportStatLoss: ground metric must be m x m");
    }
    ground_metric_ = *ground_metric;
  } else {
    ground_metric_.resize(m, m);
    for (Eigen::Index i = 0; i < m; ++i) {
      for (Eigen::Index j = 0; j < m; ++j) {
        double d2 = 0.0;
        for (std::size_t k = 0; k < dim_; ++k) {
          const double diff = points_[i][k] - points_[j][k];
          d2 += diff * diff;
        }
        const double dy = kind_ == PointwiseLoss::Linear ? 0.0 : labels_[i] - labels_[j];
        ground_metric_(i, j) = std::sqrt(d2 + dy * dy);
      }
    }
  }
  bounds_ = declared ? *declared : computed_bounds();
}

LossBounds FiniteSupportStatLoss::computed_bounds() const {
  LossBounds b;
  const std::size_t m = points_.size();
  double lo_all = 0.0;
  double hi_all = 0.0;
  bool first = true;
  for (std::size_t j = 0; j < m; ++j) {
    const auto& x = points_[j];
    const auto [lo, hi] = linear_range(x, box_);
    const double xnorm = norm2(x);
    double lj = 0.0;
    double hj = 0.0;
    switch (kind_) {
      case PointwiseLoss::Linear:
        lj = lo;
        hj = hi;
        b.G = std::max(b.G, xnorm);
        break;
      case PointwiseLoss::Squared: {
        const double r = std::max(std::abs(lo - labels_[j]), std::abs(hi - labels_[j]));
        const bool crosses = lo - labels_[j] <= 0.0 && hi - labels_[j] >= 0.0;
        const double rmin =
            crosses ? 0.0 : std::min(std::abs(lo - labels_[j]), std::abs(hi - labels_[j]));
        lj = rmin * rmin;
        hj = r * r;
        b.G = std::max(b.G, 2.0 * r * xnorm);
        break;
      }
      case PointwiseLoss::Logistic: {
        const double s = max_abs_over_box(x, box_);
        lj = softplus(-s);
        hj = softplus(s);
        b.G = std::max(b.G, xnorm);
        break;
      }
    }
    lo_all = first ? lj : std::min(lo_all, lj);
    hi_all = first ? hj : std::max(hi_all, hj);
    first = false;
  }
  // M bounds both |l| and the oscillation sup l - inf l on box x support.
  b.M = std::max({hi_all - lo_all, std::abs(hi_all), std::abs(lo_all)});

  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      const double dist = ground_metric_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      double diff = 0.0;
      switch (kind_) {
        case PointwiseLoss::Linear:
          diff = max_abs_over_box(points_[i] - points_[j], box_);
          break;
        case PointwiseLoss::Squared: {
          // a^2 - b^2 = (a - b)(a + b) with a, b the residuals.
          const double dy = labels_[i] - labels_[j];
          const double sy = labels_[i] + labels_[j];
          const double amb = max_abs_over_box(points_[i] - points_[j], box_) + std::abs(dy);
          const double apb = max_abs_over_box(points_[i] + points_[j], box_) + std::abs(sy);
          diff = amb * apb;
          break;
        }
        case PointwiseLoss::Logistic:
          // softplus is 1-Lipschitz in the margin.
          diff = max_abs_over_box(labels_[i] * points_[i] - labels_[j] * points_[j], box_);
          break;
      }
      if (diff == 0.0) continue;
      if (dist <= 0.0) {
        throw ConfigError("FiniteSupportStatLoss: distinct atoms at zero ground distance");
      }
      b.Lx = std::max(b.Lx, diff / dist);
    }
  }
  return b;
}

double FiniteSupportStatLoss::margin(const ParameterVector& theta, std::size_t j) const {
  return dot(theta, points_[j]);
}

double FiniteSupportStatLoss::pointwise(const ParameterVector& theta, std::size_t j) const {
  const double z = margin(theta, j);
  switch (kind_) {
    case PointwiseLoss::Linear: return z;
    case PointwiseLoss::Squared: return (z - labels_[j]) * (z - labels_[j]);
    case PointwiseLoss::Logistic: return softplus(-labels_[j] * z);
  }
  return 0.0;
}

std::vector<double> FiniteSupportStatLoss::pointwise_losses(const ParameterVector& theta) const {
  require_dimension(theta);
  std::vector<double> out(points_.size());
  for (std::size_t j = 0; j < points_.size(); ++j) out[j] = pointwise(theta, j);
  return out;
}

double FiniteSupportStatLoss::expected_loss(const ParameterVector& theta,
                                            const std::vector<double>& q) const {
  if (q.size() != points_.size()) throw DimensionError("expected_loss: distribution size");
  require_dimension(theta);
  double sum = 0.0;
  for (std::size_t j = 0; j < points_.size(); ++j) sum += q[j] * pointwise(theta, j);
  return sum;
}

FiniteSupportStatLoss FiniteSupportStatLoss::reweighted(std::vector<double> q) const {
  return FiniteSupportStatLoss(kind_, points_, labels_, std::move(q), box_, ground_metric_, bounds_);
}

double FiniteSupportStatLoss::loss(const ParameterVector& theta) const {
  return expected_loss(theta, probabilities_);
}

ParameterVector FiniteSupportStatLoss::gradient(const ParameterVector& theta) const {
  require_dimension(theta);
  ParameterVector g = ParameterVector::zeros(dim_);
  for (std::size_t j = 0; j < points_.size(); ++j) {
    const double z = margin(theta, j);
    double scale = 0.0;
    switch (kind_) {
      case PointwiseLoss::Linear: scale = 1.0; break;
      case PointwiseLoss::Squared: scale = 2.0 * (z - labels_[j]); break;
      case PointwiseLoss::Logistic: scale = -labels_[j] * sigmoid(-labels_[j] * z); break;
    }
    g = axpy(probabilities_[j] * scale, points_[j], g);
  }
  return g;
}

ParameterVector FiniteSupportStatLoss::hessian_vector_product(const ParameterVector& theta,
                                                              const ParameterVector& v) const {
  require_dimension(theta);
  require_same_dimension(theta, v, "FiniteSupportStatLoss::hessian_vector_product");
  ParameterVector out = ParameterVector::zeros(dim_);
  for (std::size_t j = 0; j < points_.size(); ++j) {
    double curvature = 0.0;
    switch (kind_) {
      case PointwiseLoss::Linear: curvature = 0.0; break;
      case PointwiseLoss::Squared: curvature = 2.0; break;
      case PointwiseLoss::Logistic: {
        const double s = sigmoid(-labels_[j] * margin(theta, j));
        curvature = s * (1.0 - s);
        break;
      }
    }
    out = axpy(probabilities_[j] * curvature * dot(points_[j], v), points_[j], out);
  }
  return out;
}

std::optional<QuadraticModel> FiniteSupportStatLoss::quadratic_model(
    const ParameterVector& theta) const {
  if (kind_ == PointwiseLoss::Logistic) return std::nullopt;
  const auto d = static_cast<Eigen::Index>(dim_);
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(d, d);
  if (kind_ == PointwiseLoss::Squared) {
    for (std::size_t j = 0; j < points_.size(); ++j) {
      Eigen::Map<const Eigen::VectorXd> x(points_[j].data().data(), d);
      h += 2.0 * probabilities_[j] * x * x.transpose();
    }
  }
  return QuadraticModel{loss(theta), gradient(theta), h};
}

}  // namespace dgsam
