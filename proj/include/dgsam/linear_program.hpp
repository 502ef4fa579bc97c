#pragma once

#include <vector>

#include <Eigen/Dense>

namespace dgsam {

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  double objective = 0.0;
  Eigen::VectorXd x;
};

/// maximise c'x subject to A x = b, x >= 0 (dense two-phase simplex with
/// Bland's rule, so it terminates on degenerate problems). Rows with
/// negative b are negated internally.
LpResult solve_standard_lp(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                           const Eigen::VectorXd& c, double tol = 1e-12);

}  // namespace dgsam
