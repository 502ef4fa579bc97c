#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "dgsam/objective.hpp"

namespace dgsam {

struct EigenEstimate {
  double value = 0.0;
  ParameterVector vector;
  double residual = 0.0;
  std::size_t iterations = 0;
};

/// Dominant eigenpair (largest |lambda|) of the Hessian at theta by power
/// iteration on H^2, sign recovered through the Rayleigh quotient. Stops
/// once |Hv - lambda v| <= tol; throws NumericError with the last residual
/// if that does not happen within `iters` iterations.
EigenEstimate top_eigenvalue(const DomainObjective& objective, const ParameterVector& theta,
                             std::size_t iters = 1000, double tol = 1e-8,
                             std::uint64_t seed = 0);

enum class ProbeKind { Rademacher, Gaussian };

struct SpectrumConfig {
  std::size_t probes = 16;
  /// Lanczos steps per probe; 0 means min(64, d).
  std::size_t iterations = 0;
  ProbeKind probe_kind = ProbeKind::Rademacher;
  /// Kernel width as a fraction of the estimated spectral range.
  double smoothing_fraction = 0.01;
  std::size_t grid_points = 2001;
  std::uint64_t seed = 0;

  void validate() const;
};

struct QuadratureProbe {
  std::vector<double> nodes;
  std::vector<double> weights;
  /// Lanczos stopped early because an off-diagonal coefficient vanished.
  bool breakdown = false;
};

struct SpectrumEstimate {
  std::size_t probe_count = 0;
  std::size_t iterations = 0;
  std::vector<QuadratureProbe> probes;
  double sigma = 0.0;
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  std::vector<double> grid;
  std::vector<double> density;

  /// Quadrature estimate of tr(H^p)/d, averaged over probes.
  double moment(int p) const;
  /// Trapezoidal integral of the smoothed density over the grid.
  double density_mass() const;
  bool any_breakdown() const;
};

/// Stochastic Lanczos quadrature with full reorthogonalisation.
SpectrumEstimate lanczos_spectrum(const DomainObjective& objective, const ParameterVector& theta,
                                  const SpectrumConfig& config = {});

/// Hutchinson estimate of tr(H^p)/d (p = 1 or 2) with its standard error.
struct MomentEstimate {
  double mean = 0.0;
  double stderr_ = 0.0;
};
MomentEstimate hutchinson_moment(const DomainObjective& objective, const ParameterVector& theta,
                                 int power, std::size_t probes, std::uint64_t seed,
                                 ProbeKind kind = ProbeKind::Rademacher);

}  // namespace dgsam
