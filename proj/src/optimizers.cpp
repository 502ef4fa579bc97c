#include "dgsam/optimizers.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>

namespace dgsam {
namespace {

std::vector<ObjectivePtr> draw_batches(const MultiDomainProblem& problem, SeededRng& rng,
                                       std::size_t batch_size) {
  std::vector<ObjectivePtr> out;
  out.reserve(problem.domain_count());
  for (std::size_t i = 0; i < problem.domain_count(); ++i) {
    out.push_back(sample_domain_minibatch(problem.domain(i), rng, batch_size).objective);
  }
  return out;
}

ParameterVector domain_gradient(const DomainObjective& objective, std::size_t domain,
                                const ParameterVector& theta) {
  try {
    ParameterVector g = objective.gradient(theta);
    g.check_finite("gradient");
    return g;
  } catch (const NumericError& e) {
    throw NumericError("non-finite gradient in domain " + std::to_string(domain) + ": " +
                       e.what());
  }
}

ParameterVector mean_gradient(const std::vector<ObjectivePtr>& batches,
                              const ParameterVector& theta) {
  ParameterVector sum = ParameterVector::zeros(theta.size());
  for (std::size_t i = 0; i < batches.size(); ++i) sum += domain_gradient(*batches[i], i, theta);
  return (1.0 / static_cast<double>(batches.size())) * sum;
}

void apply_update(OptimizerState& state, const OptimizerConfig& config,
                  const ParameterVector& direction) {
  state.theta = axpy(-config.learning_rate, direction, state.theta);
  state.theta.check_finite("optimizer iterate");
  ++state.iteration;
}

}  // namespace

std::string to_string(OptimizerKind kind) {
  switch (kind) {
    case OptimizerKind::Erm: return "erm";
    case OptimizerKind::Sam: return "sam";
    case OptimizerKind::Dgsam: return "dgsam";
  }
  return "unknown";
}

OptimizerKind optimizer_kind_from_string(const std::string& name) {
  std::string lower = name;
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "erm") return OptimizerKind::Erm;
  if (lower == "sam") return OptimizerKind::Sam;
  if (lower == "dgsam") return OptimizerKind::Dgsam;
  throw ConfigError("unknown optimizer kind '" + name + "'");
}

void OptimizerConfig::validate() const {
  if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate)) {
    throw ConfigError("learning_rate must be a finite value >= 0");
  }
  if (!(perturbation_radius >= 0.0) || !std::isfinite(perturbation_radius)) {
    throw ConfigError("perturbation_radius must be a finite value >= 0");
  }
  if (batch_size == 0) throw ConfigError("batch_size must be >= 1");
  if (!(zero_gradient_tolerance >= 0.0)) throw ConfigError("zero_gradient_tolerance must be >= 0");
  if (trajectory_stride == 0) throw ConfigError("trajectory_stride must be >= 1");
}

std::uint64_t grad_evals_per_step(OptimizerKind kind, std::size_t domain_count) {
  const auto s = static_cast<std::uint64_t>(domain_count);
  switch (kind) {
    case OptimizerKind::Erm: return s;
    case OptimizerKind::Sam: return 2 * s;
    case OptimizerKind::Dgsam: return s + 1;
  }
  return 0;
}

OptimizerState erm_step(const MultiDomainProblem& problem, OptimizerState state,
                        const OptimizerConfig& config) {
  const auto batches = draw_batches(problem, state.rng, config.batch_size);
  const ParameterVector g = mean_gradient(batches, state.theta);
  state.grad_evals += problem.domain_count();
  apply_update(state, config, g);
  return state;
}

OptimizerState sam_step(const MultiDomainProblem& problem, OptimizerState state,
                        const OptimizerConfig& config) {
  const auto batches = draw_batches(problem, state.rng, config.batch_size);
  const ParameterVector g = mean_gradient(batches, state.theta);
  const double gnorm = norm2(g);
  ParameterVector perturbed = state.theta;
  if (gnorm > config.zero_gradient_tolerance) {
    perturbed = axpy(config.perturbation_radius / gnorm, g, state.theta);
  }
  const ParameterVector descent = mean_gradient(batches, perturbed);
  state.grad_evals += 2 * problem.domain_count();
  apply_update(state, config, descent);
  return state;
}

DgsamAscent dgsam_ascent(const std::vector<ObjectivePtr>& batches,
                         const std::vector<std::size_t>& order, const ParameterVector& theta,
                         double rho, double zero_gradient_tolerance) {
  if (order.empty() || order.size() != batches.size()) {
    throw DimensionError("dgsam_ascent: order must list every domain once");
  }
  DgsamAscent out;
  ParameterVector point = theta;
  for (std::size_t domain : order) {
    ParameterVector g = domain_gradient(*batches.at(domain), domain, point);
    out.points.push_back(point);
    const double n = norm2(g);
    if (n > zero_gradient_tolerance) point = axpy(rho / n, g, point);
    out.gradients.push_back(std::move(g));
  }
  out.points.push_back(point);
  out.gradients.push_back(domain_gradient(*batches[order.front()], order.front(), point));
  return out;
}

OptimizerState dgsam_step(const MultiDomainProblem& problem, OptimizerState state,
                          const OptimizerConfig& config) {
  const std::size_t s = problem.domain_count();
  const std::vector<std::size_t> order = state.rng.permutation(s);
  const auto batches = draw_batches(problem, state.rng, config.batch_size);
  const DgsamAscent ascent = dgsam_ascent(batches, order, state.theta,
                                          config.perturbation_radius,
                                          config.zero_gradient_tolerance);
  ParameterVector sum = ParameterVector::zeros(state.theta.size());
  for (const auto& g : ascent.gradients) sum += g;
  state.grad_evals += s + 1;
  const double weight = static_cast<double>(s) / static_cast<double>(s + 1);
  apply_update(state, config, weight * sum);
  return state;
}

OptimizerState optimizer_step(const MultiDomainProblem& problem, OptimizerState state,
                              const OptimizerConfig& config) {
  switch (config.kind) {
    case OptimizerKind::Erm: return erm_step(problem, std::move(state), config);
    case OptimizerKind::Sam: return sam_step(problem, std::move(state), config);
    case OptimizerKind::Dgsam: return dgsam_step(problem, std::move(state), config);
  }
  throw ConfigError("unknown optimizer kind");
}

namespace {

TrajectoryPoint snapshot(const MultiDomainProblem& problem, const OptimizerState& state,
                         double wall_ms) {
  TrajectoryPoint p;
  p.iteration = state.iteration;
  p.theta = state.theta;
  p.domain_losses = problem.domain_losses(state.theta);
  double sum = 0.0;
  for (double v : p.domain_losses) sum += v;
  p.loss_total = sum / static_cast<double>(p.domain_losses.size());
  p.grad_norm = norm2(total_gradient(problem, state.theta));
  p.grad_evals = state.grad_evals;
  p.wall_ms = wall_ms;
  return p;
}

}  // namespace

RunRecord run(const MultiDomainProblem& problem, const OptimizerConfig& config,
              const ParameterVector& initial_theta, const StopCriteria& stop,
              bool record_trajectory) {
  config.validate();
  if (initial_theta.size() != problem.dimension()) {
    throw DimensionError("run: initial theta has the wrong dimension");
  }
  initial_theta.check_finite("initial theta");

  RunRecord record;
  record.config = config;
  record.initial_theta = initial_theta;

  OptimizerState state(initial_theta, config.seed);
  TrajectoryPoint current = snapshot(problem, state, 0.0);
  if (record_trajectory) record.trajectory.push_back(current);

  const bool check_tol = stop.grad_norm_tolerance > 0.0;
  bool converged = check_tol && current.grad_norm <= stop.grad_norm_tolerance;
  while (!converged && state.iteration < stop.max_iterations) {
    const auto start = std::chrono::steady_clock::now();
    try {
      state = optimizer_step(problem, std::move(state), config);
    } catch (const NumericError& e) {
      throw DivergenceError(std::string("diverged at iteration ") +
                                std::to_string(current.iteration + 1) + ": " + e.what(),
                            current);
    }
    const double ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
            .count();
    record.step_wall_ms.push_back(ms);

    const bool keep = record_trajectory &&
                      (state.iteration % config.trajectory_stride == 0 ||
                       state.iteration == stop.max_iterations);
    if (keep || check_tol || state.iteration == stop.max_iterations) {
      try {
        current = snapshot(problem, state, ms);
      } catch (const NumericError& e) {
        throw DivergenceError(std::string("diverged at iteration ") +
                                  std::to_string(state.iteration) + ": " + e.what(),
                              current);
      }
      converged = check_tol && current.grad_norm <= stop.grad_norm_tolerance;
      if (record_trajectory && (keep || converged)) record.trajectory.push_back(current);
    }
  }
  if (current.iteration != state.iteration) current = snapshot(problem, state, 0.0);

  record.final_theta = state.theta;
  record.iterations = state.iteration;
  record.grad_evals = state.grad_evals;
  record.final_loss = current.loss_total;
  record.final_grad_norm = current.grad_norm;
  record.converged = converged;
  return record;
}

RunRecord run(const MultiDomainProblem& problem, const OptimizerConfig& config,
              const ParameterVector& initial_theta) {
  return run(problem, config, initial_theta, StopCriteria{config.max_iterations, 0.0});
}

}  // namespace dgsam
