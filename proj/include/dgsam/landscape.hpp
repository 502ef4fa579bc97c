#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "dgsam/problem.hpp"
#include "dgsam/seeded_rng.hpp"

namespace dgsam {

struct LandscapeCell {
  double u = 0.0;
  double v = 0.0;
  double loss_total = 0.0;
  std::vector<double> domain_losses;
  /// False when any domain loss at this cell was NaN/Inf.
  bool finite = true;
};

struct LandscapeGrid {
  ParameterVector center;
  ParameterVector dir1;
  ParameterVector dir2;
  double half_width = 0.0;
  std::size_t resolution = 0;
  /// Row-major: index = i * resolution + j with u = coordinate(i), v = coordinate(j).
  std::vector<LandscapeCell> cells;
};

/// Two random orthonormal directions.
std::pair<ParameterVector, ParameterVector> random_directions(std::size_t dim, SeededRng& rng);

/// Losses on center + u*d1 + v*d2 for u, v on a uniform resolution x resolution
/// grid over [-half_width, half_width]. The directions are Gram-Schmidt
/// orthonormalised first; parallel directions are rejected.
LandscapeGrid landscape_grid(const MultiDomainProblem& problem, const ParameterVector& center,
                             const ParameterVector& dir1, const ParameterVector& dir2,
                             double half_width, std::size_t resolution);

}  // namespace dgsam
