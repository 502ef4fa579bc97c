#include "dgsam/uncertainty.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>

#include "dgsam/errors.hpp"
#include "dgsam/linear_program.hpp"

namespace dgsam {

std::string to_string(Divergence kind) {
  switch (kind) {
    case Divergence::KL: return "kl";
    case Divergence::TV: return "tv";
    case Divergence::W1: return "w1";
  }
  return "unknown";
}

Divergence divergence_from_string(const std::string& name) {
  std::string lower = name;
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "kl") return Divergence::KL;
  if (lower == "tv") return Divergence::TV;
  if (lower == "w1") return Divergence::W1;
  throw ConfigError("unknown divergence '" + name + "'");
}

double rho_of_delta(double M, double G, double Lx, Divergence kind, double delta) {
  if (!(G > 0.0)) throw ConfigError("rho_of_delta: G must be > 0");
  if (!(delta >= 0.0)) throw ConfigError("rho_of_delta: delta must be >= 0");
  switch (kind) {
    case Divergence::KL:
      if (!(M >= 0.0)) throw ConfigError("rho_of_delta: M must be >= 0");
      return (M / G) * std::sqrt(delta / 2.0);
    case Divergence::TV:
      if (!(M >= 0.0)) throw ConfigError("rho_of_delta: M must be >= 0");
      return (M / G) * delta;
    case Divergence::W1:
      if (!(Lx >= 0.0)) throw ConfigError("rho_of_delta: Lx must be >= 0");
      return (Lx / G) * delta;
  }
  throw ConfigError("rho_of_delta: unknown divergence");
}

double kl_divergence(const std::vector<double>& q, const std::vector<double>& p) {
  if (q.size() != p.size()) throw DimensionError("kl_divergence: size mismatch");
  double kl = 0.0;
  for (std::size_t j = 0; j < q.size(); ++j) {
    if (q[j] <= 0.0) continue;
    if (p[j] <= 0.0) return std::numeric_limits<double>::infinity();
    kl += q[j] * std::log(q[j] / p[j]);
  }
  return std::max(0.0, kl);
}

double tv_distance(const std::vector<double>& q, const std::vector<double>& p) {
  if (q.size() != p.size()) throw DimensionError("tv_distance: size mismatch");
  double s = 0.0;
  for (std::size_t j = 0; j < q.size(); ++j) s += std::abs(q[j] - p[j]);
  return 0.5 * s;
}

double w1_distance(const std::vector<double>& q, const std::vector<double>& p,
                   const Eigen::MatrixXd& metric) {
  const auto m = static_cast<Eigen::Index>(p.size());
  if (static_cast<Eigen::Index>(q.size()) != m || metric.rows() != m || metric.cols() != m) {
    throw DimensionError("w1_distance: size mismatch");
  }
  // Plan pi(i, j) moves mass from p_i to q_j; variables flattened as i*m + j.
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(2 * m, m * m);
  Eigen::VectorXd b(2 * m);
  Eigen::VectorXd c(m * m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      A(i, i * m + j) = 1.0;
      A(m + j, i * m + j) = 1.0;
      c(i * m + j) = -metric(i, j);
    }
    b(i) = p[static_cast<std::size_t>(i)];
    b(m + i) = q[static_cast<std::size_t>(i)];
  }
  const LpResult r = solve_standard_lp(A, b, c);
  if (r.status != LpStatus::Optimal) throw NumericError("w1_distance: transport LP failed");
  return std::max(0.0, -r.objective);
}

void UncertaintySet::validate() const {
  if (!base) throw ConfigError("uncertainty set: missing base distribution");
  if (!(delta >= 0.0) || !std::isfinite(delta)) throw ConfigError("uncertainty set: delta must be >= 0");
}

double UncertaintySet::divergence_from_base(const std::vector<double>& q) const {
  validate();
  const auto& p = base->probabilities();
  switch (kind) {
    case Divergence::KL: return kl_divergence(q, p);
    case Divergence::TV: return tv_distance(q, p);
    case Divergence::W1: return w1_distance(q, p, base->ground_metric());
  }
  throw ConfigError("uncertainty set: unknown divergence");
}

bool UncertaintySet::contains(const std::vector<double>& q, double tol) const {
  if (q.size() != base->support_size()) return false;
  double sum = 0.0;
  for (double v : q) {
    if (!(v >= 0.0)) return false;
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-9) return false;
  return divergence_from_base(q) <= delta + tol;
}

}  // namespace dgsam
