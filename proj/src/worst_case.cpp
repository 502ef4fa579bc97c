#include "dgsam/worst_case.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "dgsam/errors.hpp"
#include "dgsam/linear_program.hpp"

namespace dgsam {
namespace {

void check_inputs(const std::vector<double>& losses, const std::vector<double>& p, double delta) {
  if (losses.size() != p.size() || p.empty()) throw DimensionError("worst case: size mismatch");
  validate_distribution(p, "worst case base distribution");
  for (double l : losses) {
    if (!std::isfinite(l)) throw NumericError("worst case: non-finite pointwise loss");
  }
  if (!(delta >= 0.0) || !std::isfinite(delta)) throw ConfigError("worst case: delta must be >= 0");
}

double expectation(const std::vector<double>& losses, const std::vector<double>& q) {
  double s = 0.0;
  for (std::size_t j = 0; j < q.size(); ++j) s += q[j] * losses[j];
  return s;
}

struct Tilt {
  std::vector<double> q;
  double kl = 0.0;
};

Tilt tilt(const std::vector<double>& losses, const std::vector<double>& p, double lmax,
          double beta) {
  Tilt t;
  t.q.assign(p.size(), 0.0);
  double z = 0.0;
  for (std::size_t j = 0; j < p.size(); ++j) {
    if (p[j] > 0.0) {
      t.q[j] = p[j] * std::exp(beta * (losses[j] - lmax));
      z += t.q[j];
    }
  }
  double shifted_mean = 0.0;
  for (std::size_t j = 0; j < p.size(); ++j) {
    t.q[j] /= z;
    shifted_mean += t.q[j] * (losses[j] - lmax);
  }
  t.kl = std::max(0.0, beta * shifted_mean - std::log(z));
  return t;
}

}  // namespace

WorstCaseResult worst_case_kl(const std::vector<double>& losses, const std::vector<double>& p,
                              double delta) {
  check_inputs(losses, p, delta);
  WorstCaseResult out;
  out.base_value = expectation(losses, p);

  double lmax = -std::numeric_limits<double>::infinity();
  double lmin = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < p.size(); ++j) {
    if (p[j] > 0.0) {
      lmax = std::max(lmax, losses[j]);
      lmin = std::min(lmin, losses[j]);
    }
  }
  const double range = lmax - lmin;
  if (delta == 0.0 || range <= 0.0) {
    out.q = p;
    out.value = out.base_value;
    return out;
  }

  const double tie = 1e-14 * std::max(1.0, std::abs(lmax));
  double top_mass = 0.0;
  for (std::size_t j = 0; j < p.size(); ++j) {
    if (p[j] > 0.0 && losses[j] >= lmax - tie) top_mass += p[j];
  }
  const double point_mass_kl = -std::log(top_mass);
  if (point_mass_kl <= delta + 1e-10) {
    out.q.assign(p.size(), 0.0);
    for (std::size_t j = 0; j < p.size(); ++j) {
      if (p[j] > 0.0 && losses[j] >= lmax - tie) out.q[j] = p[j] / top_mass;
    }
    out.value = expectation(losses, out.q);
    out.divergence = std::max(0.0, point_mass_kl);
    return out;
  }

  double lo = 0.0;
  double hi = 1.0 / range;
  while (tilt(losses, p, lmax, hi).kl <= delta) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e300) throw NumericError("worst_case_kl: no bisection bracket found");
  }
  for (int it = 0; it < 300; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (tilt(losses, p, lmax, mid).kl <= delta) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  if (hi - lo > 1e-9 * std::max(1.0, hi)) {
    throw NumericError("worst_case_kl: bisection did not converge, bracket [" +
                       std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
  const Tilt best = tilt(losses, p, lmax, lo);
  out.q = best.q;
  out.divergence = best.kl;
  out.value = expectation(losses, out.q);
  return out;
}

WorstCaseResult worst_case_tv(const std::vector<double>& losses, const std::vector<double>& p,
                              double delta) {
  check_inputs(losses, p, delta);
  WorstCaseResult out;
  out.base_value = expectation(losses, p);
  out.q = p;
  const auto top = static_cast<std::size_t>(
      std::max_element(losses.begin(), losses.end()) - losses.begin());
  double budget = std::min(delta, 1.0 - p[top]);

  std::vector<std::size_t> order(p.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return losses[a] < losses[b]; });
  double moved = 0.0;
  for (std::size_t j : order) {
    if (budget <= 0.0) break;
    if (j == top || losses[j] >= losses[top]) continue;
    const double take = std::min(budget, out.q[j]);
    out.q[j] -= take;
    out.q[top] += take;
    budget -= take;
    moved += take;
  }
  out.divergence = moved;
  out.value = expectation(losses, out.q);
  return out;
}

WorstCaseResult worst_case_w1(const std::vector<double>& losses, const std::vector<double>& p,
                              const Eigen::MatrixXd& metric, double delta) {
  check_inputs(losses, p, delta);
  const auto m = static_cast<Eigen::Index>(p.size());
  if (m > 16) throw ConfigError("worst_case_w1: support larger than 16 atoms");
  if (metric.rows() != m || metric.cols() != m) throw DimensionError("worst_case_w1: metric size");

  // Variables: plan pi(i, j) at i*m + j, then one budget slack.
  const Eigen::Index nv = m * m + 1;
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(m + 1, nv);
  Eigen::VectorXd b(m + 1);
  Eigen::VectorXd c = Eigen::VectorXd::Zero(nv);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      A(i, i * m + j) = 1.0;
      A(m, i * m + j) = metric(i, j);
      c(i * m + j) = losses[static_cast<std::size_t>(j)];
    }
    b(i) = p[static_cast<std::size_t>(i)];
  }
  A(m, nv - 1) = 1.0;
  b(m) = delta;
  const LpResult r = solve_standard_lp(A, b, c);
  if (r.status != LpStatus::Optimal) throw NumericError("worst_case_w1: LP did not reach an optimum");

  WorstCaseResult out;
  out.base_value = expectation(losses, p);
  out.q.assign(p.size(), 0.0);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) out.q[static_cast<std::size_t>(j)] += r.x(i * m + j);
  }
  const double total = std::accumulate(out.q.begin(), out.q.end(), 0.0);
  for (double& v : out.q) v /= total;
  out.value = expectation(losses, out.q);
  out.divergence = w1_distance(out.q, p, metric);
  return out;
}

WorstCaseResult worst_case_risk(const UncertaintySet& uset, const ParameterVector& theta) {
  uset.validate();
  const auto losses = uset.base->pointwise_losses(theta);
  const auto& p = uset.base->probabilities();
  switch (uset.kind) {
    case Divergence::KL: return worst_case_kl(losses, p, uset.delta);
    case Divergence::TV: return worst_case_tv(losses, p, uset.delta);
    case Divergence::W1: return worst_case_w1(losses, p, uset.base->ground_metric(), uset.delta);
  }
  throw ConfigError("worst_case_risk: unknown divergence");
}

std::vector<WorstCaseResult> per_domain_worst_case(const MultiDomainProblem& problem,
                                                   const ParameterVector& theta, Divergence kind,
                                                   double delta) {
  std::vector<WorstCaseResult> out;
  for (std::size_t i = 0; i < problem.domain_count(); ++i) {
    auto base = std::dynamic_pointer_cast<const FiniteSupportStatLoss>(problem.domain_ptr(i));
    if (!base) {
      throw ConfigError("worst-case risk needs finite-support domains; domain " +
                        std::to_string(i) + " is '" + problem.domain(i).name() + "'");
    }
    out.push_back(worst_case_risk(UncertaintySet{base, kind, delta}, theta));
  }
  return out;
}

double average_worst_case_risk(const MultiDomainProblem& problem, const ParameterVector& theta,
                               Divergence kind, double delta) {
  double sum = 0.0;
  for (const auto& r : per_domain_worst_case(problem, theta, kind, delta)) sum += r.value;
  return sum / static_cast<double>(problem.domain_count());
}

}  // namespace dgsam
