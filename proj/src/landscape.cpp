#include "dgsam/landscape.hpp"

#include <cmath>

#include "dgsam/errors.hpp"

namespace dgsam {
namespace {

std::pair<ParameterVector, ParameterVector> orthonormalize(const ParameterVector& a,
                                                           const ParameterVector& b) {
  const double na = norm2(a);
  if (!(na > 0.0)) throw ConfigError("landscape: first direction is zero");
  ParameterVector e1 = (1.0 / na) * a;
  ParameterVector r = axpy(-dot(b, e1), e1, b);
  const double nr = norm2(r);
  if (!(nr > 1e-12 * std::max(1.0, norm2(b)))) {
    throw ConfigError("landscape: directions are parallel");
  }
  return {e1, (1.0 / nr) * r};
}

}  // namespace

std::pair<ParameterVector, ParameterVector> random_directions(std::size_t dim, SeededRng& rng) {
  if (dim < 2) throw ConfigError("landscape: need dimension >= 2 for two directions");
  const ParameterVector a = rng.normal_vector(dim);
  const ParameterVector b = rng.normal_vector(dim);
  return orthonormalize(a, b);
}

LandscapeGrid landscape_grid(const MultiDomainProblem& problem, const ParameterVector& center,
                             const ParameterVector& dir1, const ParameterVector& dir2,
                             double half_width, std::size_t resolution) {
  if (resolution < 2) throw ConfigError("landscape resolution must be >= 2");
  if (!(half_width > 0.0)) throw ConfigError("landscape half_width must be > 0");
  require_same_dimension(center, dir1, "landscape_grid");
  require_same_dimension(center, dir2, "landscape_grid");
  if (center.size() != problem.dimension()) throw DimensionError("landscape_grid: dimension mismatch");

  LandscapeGrid grid;
  grid.center = center;
  std::tie(grid.dir1, grid.dir2) = orthonormalize(dir1, dir2);
  grid.half_width = half_width;
  grid.resolution = resolution;

  const auto coord = [&](std::size_t k) {
    return -half_width + 2.0 * half_width * static_cast<double>(k) /
                             static_cast<double>(resolution - 1);
  };
  grid.cells.reserve(resolution * resolution);
  for (std::size_t i = 0; i < resolution; ++i) {
    for (std::size_t j = 0; j < resolution; ++j) {
      LandscapeCell cell;
      cell.u = coord(i);
      cell.v = coord(j);
      const ParameterVector point = axpy(cell.v, grid.dir2, axpy(cell.u, grid.dir1, center));
      double sum = 0.0;
      for (const auto& d : problem.domains()) {
        const double l = d->loss(point);
        if (!std::isfinite(l)) cell.finite = false;
        cell.domain_losses.push_back(l);
        sum += l;
      }
      cell.loss_total = sum / static_cast<double>(problem.domain_count());
      grid.cells.push_back(std::move(cell));
    }
  }
  return grid;
}

}  // namespace dgsam
