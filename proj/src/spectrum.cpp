#include "dgsam/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Dense>

#include "dgsam/errors.hpp"
#include "dgsam/seeded_rng.hpp"

namespace dgsam {
namespace {

ParameterVector draw_probe(SeededRng& rng, std::size_t dim, ProbeKind kind) {
  return kind == ProbeKind::Rademacher ? rng.rademacher_vector(dim) : rng.normal_vector(dim);
}

QuadratureProbe lanczos_probe(const DomainObjective& objective, const ParameterVector& theta,
                              const ParameterVector& probe, std::size_t steps) {
  const std::size_t dim = theta.size();
  std::vector<ParameterVector> basis;
  std::vector<double> alpha;
  std::vector<double> beta;
  QuadratureProbe out;

  ParameterVector q = (1.0 / norm2(probe)) * probe;
  for (std::size_t k = 0; k < steps; ++k) {
    basis.push_back(q);
    ParameterVector w = objective.hessian_vector_product(theta, q);
    const double a = dot(w, q);
    alpha.push_back(a);
    // Full reorthogonalisation, applied twice for stability.
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& b : basis) w = axpy(-dot(w, b), b, w);
    }
    if (k + 1 == steps || k + 1 == dim) break;
    const double bnorm = norm2(w);
    const double scale = std::max(1.0, std::abs(a));
    if (bnorm <= 1e-10 * scale) {
      out.breakdown = true;
      break;
    }
    beta.push_back(bnorm);
    q = (1.0 / bnorm) * w;
  }

  const auto m = static_cast<Eigen::Index>(alpha.size());
  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    T(i, i) = alpha[static_cast<std::size_t>(i)];
    if (i + 1 < m) {
      T(i, i + 1) = T(i + 1, i) = beta[static_cast<std::size_t>(i)];
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(T);
  if (eig.info() != Eigen::Success) throw NumericError("lanczos: tridiagonal eigensolver failed");
  for (Eigen::Index i = 0; i < m; ++i) {
    out.nodes.push_back(eig.eigenvalues()(i));
    const double c = eig.eigenvectors()(0, i);
    out.weights.push_back(c * c);
  }
  return out;
}

}  // namespace

EigenEstimate top_eigenvalue(const DomainObjective& objective, const ParameterVector& theta,
                             std::size_t iters, double tol, std::uint64_t seed) {
  if (theta.size() != objective.dimension()) throw DimensionError("top_eigenvalue: dimension mismatch");
  SeededRng rng(seed);
  ParameterVector v = rng.unit_sphere(theta.size());
  EigenEstimate est;
  est.residual = std::numeric_limits<double>::infinity();
  for (std::size_t it = 1; it <= iters; ++it) {
    const ParameterVector hv = objective.hessian_vector_product(theta, v);
    const double lambda = dot(v, hv);
    const double residual = norm2(axpy(-lambda, v, hv));
    est = {lambda, v, residual, it};
    if (residual <= tol) return est;
    const ParameterVector h2v = objective.hessian_vector_product(theta, hv);
    const double n = norm2(h2v);
    if (!(n > 0.0)) {
      // v lies in the null space: zero is the dominant eigenvalue only if H == 0.
      if (norm2(hv) == 0.0) return {0.0, v, 0.0, it};
      v = rng.unit_sphere(theta.size());
      continue;
    }
    v = (1.0 / n) * h2v;
  }
  throw NumericError("top_eigenvalue: no convergence after " + std::to_string(iters) +
                     " iterations, last residual " + std::to_string(est.residual));
}

void SpectrumConfig::validate() const {
  if (probes == 0) throw ConfigError("spectrum probes must be >= 1");
  if (!(smoothing_fraction > 0.0)) throw ConfigError("spectrum smoothing_fraction must be > 0");
  if (grid_points < 2) throw ConfigError("spectrum grid_points must be >= 2");
}

double SpectrumEstimate::moment(int p) const {
  double total = 0.0;
  for (const auto& probe : probes) {
    for (std::size_t i = 0; i < probe.nodes.size(); ++i) {
      total += probe.weights[i] * std::pow(probe.nodes[i], p);
    }
  }
  return total / static_cast<double>(probes.size());
}

double SpectrumEstimate::density_mass() const {
  double mass = 0.0;
  for (std::size_t i = 1; i < grid.size(); ++i) {
    mass += 0.5 * (density[i] + density[i - 1]) * (grid[i] - grid[i - 1]);
  }
  return mass;
}

bool SpectrumEstimate::any_breakdown() const {
  return std::any_of(probes.begin(), probes.end(), [](const auto& p) { return p.breakdown; });
}

SpectrumEstimate lanczos_spectrum(const DomainObjective& objective, const ParameterVector& theta,
                                  const SpectrumConfig& config) {
  config.validate();
  const std::size_t dim = objective.dimension();
  if (theta.size() != dim) throw DimensionError("lanczos_spectrum: dimension mismatch");
  const std::size_t steps = config.iterations == 0 ? std::min<std::size_t>(64, dim) : config.iterations;
  if (steps > dim) throw ConfigError("lanczos iterations must not exceed the dimension");

  SpectrumEstimate est;
  est.probe_count = config.probes;
  est.iterations = steps;
  SeededRng rng(config.seed);
  for (std::size_t p = 0; p < config.probes; ++p) {
    est.probes.push_back(lanczos_probe(objective, theta, draw_probe(rng, dim, config.probe_kind), steps));
  }

  est.lambda_min = std::numeric_limits<double>::infinity();
  est.lambda_max = -std::numeric_limits<double>::infinity();
  for (const auto& probe : est.probes) {
    for (double x : probe.nodes) {
      est.lambda_min = std::min(est.lambda_min, x);
      est.lambda_max = std::max(est.lambda_max, x);
    }
  }
  const double span = est.lambda_max - est.lambda_min;
  est.sigma = span > 0.0 ? config.smoothing_fraction * span
                         : config.smoothing_fraction * std::max(1.0, std::abs(est.lambda_max));

  const double lo = est.lambda_min - 6.0 * est.sigma;
  const double hi = est.lambda_max + 6.0 * est.sigma;
  const double norm = 1.0 / (est.sigma * std::sqrt(2.0 * std::numbers::pi) *
                             static_cast<double>(est.probes.size()));
  est.grid.resize(config.grid_points);
  est.density.assign(config.grid_points, 0.0);
  for (std::size_t i = 0; i < config.grid_points; ++i) {
    const double x = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(config.grid_points - 1);
    est.grid[i] = x;
    double d = 0.0;
    for (const auto& probe : est.probes) {
      for (std::size_t k = 0; k < probe.nodes.size(); ++k) {
        const double z = (x - probe.nodes[k]) / est.sigma;
        d += probe.weights[k] * std::exp(-0.5 * z * z);
      }
    }
    est.density[i] = d * norm;
  }
  return est;
}

MomentEstimate hutchinson_moment(const DomainObjective& objective, const ParameterVector& theta,
                                 int power, std::size_t probes, std::uint64_t seed,
                                 ProbeKind kind) {
  if (power != 1 && power != 2) throw ConfigError("hutchinson_moment: power must be 1 or 2");
  if (probes < 2) throw ConfigError("hutchinson_moment: need at least two probes");
  const std::size_t dim = theta.size();
  SeededRng rng(seed);
  std::vector<double> samples;
  for (std::size_t p = 0; p < probes; ++p) {
    const ParameterVector v = draw_probe(rng, dim, kind);
    const ParameterVector hv = objective.hessian_vector_product(theta, v);
    const double s = power == 1 ? dot(v, hv) : dot(hv, hv);
    samples.push_back(s / static_cast<double>(dim));
  }
  double mean = 0.0;
  for (double s : samples) mean += s;
  mean /= static_cast<double>(probes);
  double var = 0.0;
  for (double s : samples) var += (s - mean) * (s - mean);
  var /= static_cast<double>(probes - 1);
  return {mean, std::sqrt(var / static_cast<double>(probes))};
}

}  // namespace dgsam
