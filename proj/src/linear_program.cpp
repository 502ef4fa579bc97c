#include "dgsam/linear_program.hpp"

#include <cmath>
#include <limits>

#include "dgsam/errors.hpp"

namespace dgsam {
namespace {

using Eigen::Index;

/// Tableau rows 0..m-1 hold constraints, row m the reduced costs of the
/// objective being maximised (stored as -c so a negative entry can improve).
struct Tableau {
  Eigen::MatrixXd t;
  std::vector<Index> basis;
  Index m = 0;
  Index n = 0;  // structural + artificial columns; rhs is column n

  void pivot(Index row, Index col) {
    t.row(row) /= t(row, col);
    for (Index r = 0; r <= m; ++r) {
      if (r != row && t(r, col) != 0.0) t.row(r) -= t(r, col) * t.row(row);
    }
    basis[static_cast<std::size_t>(row)] = col;
  }

  /// Runs simplex iterations on the objective row; columns >= allowed are
  /// never entered. Returns false if unbounded.
  bool optimize(Index allowed, double tol) {
    for (int guard = 0; guard < 100000; ++guard) {
      Index enter = -1;
      for (Index j = 0; j < allowed; ++j) {
        if (t(m, j) < -tol) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return true;
      Index leave = -1;
      double best = std::numeric_limits<double>::infinity();
      for (Index r = 0; r < m; ++r) {
        if (t(r, enter) > tol) {
          const double ratio = t(r, n) / t(r, enter);
          if (ratio < best - tol ||
              (std::abs(ratio - best) <= tol && leave >= 0 &&
               basis[static_cast<std::size_t>(r)] < basis[static_cast<std::size_t>(leave)])) {
            best = ratio;
            leave = r;
          }
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter);
    }
    throw NumericError("simplex: iteration limit reached");
  }
};

}  // namespace

LpResult solve_standard_lp(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                           const Eigen::VectorXd& c, double tol) {
  const Index m = A.rows();
  const Index nv = A.cols();
  if (b.size() != m || c.size() != nv) throw DimensionError("solve_standard_lp: size mismatch");

  Tableau tab;
  tab.m = m;
  tab.n = nv + m;
  tab.t = Eigen::MatrixXd::Zero(m + 1, tab.n + 1);
  for (Index r = 0; r < m; ++r) {
    const double sign = b(r) < 0.0 ? -1.0 : 1.0;
    tab.t.block(r, 0, 1, nv) = sign * A.row(r);
    tab.t(r, nv + r) = 1.0;
    tab.t(r, tab.n) = sign * b(r);
    tab.basis.push_back(nv + r);
  }
  // Phase 1: maximise -sum(artificials).
  for (Index r = 0; r < m; ++r) tab.t.row(m) -= tab.t.row(r);
  for (Index r = 0; r < m; ++r) tab.t(m, nv + r) = 0.0;
  tab.optimize(nv, tol);

  LpResult result;
  const double scale = std::max(1.0, b.cwiseAbs().maxCoeff());
  if (-tab.t(m, tab.n) > 1e-9 * scale) {
    result.status = LpStatus::Infeasible;
    return result;
  }
  // Drive remaining (zero-valued) artificials out of the basis where possible.
  for (Index r = 0; r < m; ++r) {
    if (tab.basis[static_cast<std::size_t>(r)] >= nv) {
      for (Index j = 0; j < nv; ++j) {
        if (std::abs(tab.t(r, j)) > 1e-9) {
          tab.pivot(r, j);
          break;
        }
      }
    }
  }

  // Phase 2 objective row: -c, then eliminate basic columns.
  tab.t.row(m).setZero();
  tab.t.block(m, 0, 1, nv) = -c.transpose();
  for (Index r = 0; r < m; ++r) {
    const Index col = tab.basis[static_cast<std::size_t>(r)];
    if (col < nv && tab.t(m, col) != 0.0) tab.t.row(m) -= tab.t(m, col) * tab.t.row(r);
  }
  if (!tab.optimize(nv, tol)) {
    result.status = LpStatus::Unbounded;
    return result;
  }

  result.status = LpStatus::Optimal;
  result.x = Eigen::VectorXd::Zero(nv);
  for (Index r = 0; r < m; ++r) {
    const Index col = tab.basis[static_cast<std::size_t>(r)];
    if (col < nv) result.x(col) = std::max(0.0, tab.t(r, tab.n));
  }
  result.objective = c.dot(result.x);
  return result;
}

}  // namespace dgsam
