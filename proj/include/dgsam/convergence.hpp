#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

#include "dgsam/problem.hpp"
#include "dgsam/quadratic_objective.hpp"

namespace dgsam {

/// Smoothness L, expected-residual constants M1..M3, initial optimality gap
/// M4, domain count S and target accuracy epsilon.
struct ConvergenceBudget {
  double L = 1.0;
  double M1 = 0.0;
  double M2 = 0.0;
  double M3 = 0.0;
  double M4 = 0.0;
  std::size_t S = 1;
  double epsilon = 0.1;

  void validate() const;
};

struct ConvergenceConstants {
  /// Iteration threshold before rounding up.
  double T_min_real = 0.0;
  std::uint64_t T_min = 0;
  double rho_bar = 0.0;
  double gamma_bar = 0.0;
  /// Fixed-point rounds used to reconcile gamma_bar with T (at most 3).
  int rounds = 0;
};

/// Step-size ceiling for a horizon of T iterations; branches whose constant
/// is zero are dropped.
double gamma_bar_at(const ConvergenceBudget& budget, double T);

ConvergenceConstants convergence_constants(const ConvergenceBudget& budget);

/// Closed-form constants for a quadratic ensemble whose mean Hessian is
/// positive definite, for the estimator "gradient of a uniformly drawn domain":
///   shared Hessian: M1 = 0, M2 = 1, M3 = mean |r_i|^2
///   otherwise:      M1 = 2 kappa, M2 = 0, M3 = 2 mean |r_i|^2
/// with r_i = grad L_i(theta*) and kappa = lambda_max(Hbar^-1/2 mean(H_i^2) Hbar^-1/2).
struct QuadraticErConstants {
  double L = 0.0;
  double M1 = 0.0;
  double M2 = 0.0;
  double M3 = 0.0;
  ParameterVector minimizer;
  double min_loss = 0.0;
};
QuadraticErConstants quadratic_er_constants(const QuadraticDomainEnsemble& ensemble);

/// Budget for a quadratic ensemble started at theta0.
ConvergenceBudget quadratic_budget(const QuadraticDomainEnsemble& ensemble,
                                   const ParameterVector& theta0, double epsilon);

/// Sampled constants for a general problem: L is 1.5x the largest Hessian
/// operator norm seen at the sample points; M1 = 0, M2 = 1 and M3 is twice
/// the largest observed mean_i |grad L_i|^2 - |grad L_s|^2. M4 uses
/// `min_loss` as the optimum value.
ConvergenceBudget sampled_budget(const MultiDomainProblem& problem,
                                 const std::vector<ParameterVector>& sample_points,
                                 const ParameterVector& theta0, double min_loss, double epsilon,
                                 std::uint64_t seed);

enum class Verdict { Pass, Fail, Inconclusive };
std::string to_string(Verdict v);

struct StationarityReport {
  Verdict verdict = Verdict::Inconclusive;
  ConvergenceBudget budget;
  ConvergenceConstants constants;
  std::uint64_t cap = 0;
  std::uint64_t steps_run = 0;
  double initial_grad_norm = 0.0;
  double min_grad_norm = 0.0;
  std::uint64_t argmin_iteration = 0;
};

/// Runs DGSAM with gamma_bar and rho_bar for up to min(T_min, cap) steps and
/// tracks min_t |grad L_s(theta_t)|. PASS as soon as it reaches epsilon;
/// FAIL if all T_min steps ran without reaching it; INCONCLUSIVE if the cap
/// cut the run short.
StationarityReport empirical_stationarity_test(const MultiDomainProblem& problem,
                                               const ConvergenceBudget& budget,
                                               const ParameterVector& theta0, std::uint64_t seed,
                                               std::uint64_t cap = 100000,
                                               std::size_t batch_size = 32);

}  // namespace dgsam
