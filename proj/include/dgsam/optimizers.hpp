#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "dgsam/errors.hpp"
#include "dgsam/problem.hpp"
#include "dgsam/seeded_rng.hpp"

namespace dgsam {

enum class OptimizerKind { Erm, Sam, Dgsam };

std::string to_string(OptimizerKind kind);
/// Accepts "erm", "sam", "dgsam" (case-insensitive).
OptimizerKind optimizer_kind_from_string(const std::string& name);

struct OptimizerConfig {
  OptimizerKind kind = OptimizerKind::Dgsam;
  double learning_rate = 0.1;
  double perturbation_radius = 0.05;
  /// Per-domain minibatch size; ignored by analytic objectives.
  std::size_t batch_size = 32;
  std::size_t max_iterations = 100;
  std::uint64_t seed = 0;
  double zero_gradient_tolerance = 1e-12;
  /// Record every k-th iterate in the trajectory (the final iterate is always kept).
  std::size_t trajectory_stride = 1;

  void validate() const;
};

/// Gradient evaluations one step costs with S domains: S, 2S or S+1.
std::uint64_t grad_evals_per_step(OptimizerKind kind, std::size_t domain_count);

struct OptimizerState {
  ParameterVector theta;
  std::size_t iteration = 0;
  SeededRng rng;
  std::uint64_t grad_evals = 0;

  OptimizerState(ParameterVector initial, std::uint64_t seed)
      : theta(std::move(initial)), rng(seed) {}
};

OptimizerState erm_step(const MultiDomainProblem& problem, OptimizerState state,
                        const OptimizerConfig& config);
OptimizerState sam_step(const MultiDomainProblem& problem, OptimizerState state,
                        const OptimizerConfig& config);
OptimizerState dgsam_step(const MultiDomainProblem& problem, OptimizerState state,
                          const OptimizerConfig& config);
/// Dispatches on config.kind.
OptimizerState optimizer_step(const MultiDomainProblem& problem, OptimizerState state,
                              const OptimizerConfig& config);

/// Sequential ascent of one DGSAM iteration for a fixed order and fixed
/// per-domain objectives (already minibatched). `points[j]` is the point at
/// which `gradients[j]` was evaluated; the last gradient is the corrective
/// re-evaluation of the first domain in `order`.
struct DgsamAscent {
  std::vector<ParameterVector> points;
  std::vector<ParameterVector> gradients;
};
DgsamAscent dgsam_ascent(const std::vector<ObjectivePtr>& batches,
                         const std::vector<std::size_t>& order, const ParameterVector& theta,
                         double rho, double zero_gradient_tolerance);

struct StopCriteria {
  std::size_t max_iterations = 100;
  /// Stop once the full-batch total gradient norm falls to this value (0 disables).
  double grad_norm_tolerance = 0.0;
};

struct TrajectoryPoint {
  std::size_t iteration = 0;
  ParameterVector theta;
  double loss_total = 0.0;
  std::vector<double> domain_losses;
  double grad_norm = 0.0;
  std::uint64_t grad_evals = 0;
  double wall_ms = 0.0;
};

struct RunRecord {
  OptimizerConfig config;
  ParameterVector initial_theta;
  ParameterVector final_theta;
  std::size_t iterations = 0;
  std::uint64_t grad_evals = 0;
  double final_loss = 0.0;
  double final_grad_norm = 0.0;
  bool converged = false;
  std::vector<TrajectoryPoint> trajectory;
  /// Wall-clock milliseconds of every step, in order.
  std::vector<double> step_wall_ms;
};

/// Thrown by run() when the loss or an iterate stops being finite.
class DivergenceError : public NumericError {
 public:
  DivergenceError(const std::string& what, TrajectoryPoint last_finite)
      : NumericError(what), last_finite_(std::move(last_finite)) {}
  const TrajectoryPoint& last_finite() const { return last_finite_; }

 private:
  TrajectoryPoint last_finite_;
};

RunRecord run(const MultiDomainProblem& problem, const OptimizerConfig& config,
              const ParameterVector& initial_theta, const StopCriteria& stop,
              bool record_trajectory = true);
/// Convenience overload: stop after config.max_iterations.
RunRecord run(const MultiDomainProblem& problem, const OptimizerConfig& config,
              const ParameterVector& initial_theta);

}  // namespace dgsam
