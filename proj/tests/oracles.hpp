#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <numeric>
#include <vector>

// Brute-force reference computations for the test suite. None of these call the library's solvers.
namespace oracle {

using Fn2 = std::function<double(double, double)>;

/// max over the closed disk of radius rho of f(x + d) - f(x) by a polar grid followed by
/// a few rounds of local refinement around the best cell.
inline double disk_grid_sharpness(const Fn2& f, double x, double y, double rho,
                                  int angles = 720, int radii = 60) {
  const double base = f(x, y);
  double best = 0.0;
  double best_r = 0.0;
  double best_a = 0.0;
  for (int i = 0; i <= radii; ++i) {
    const double r = rho * i / radii;
    for (int k = 0; k < angles; ++k) {
      const double a = 2.0 * std::numbers::pi * k / angles;
      const double v = f(x + r * std::cos(a), y + r * std::sin(a)) - base;
      if (v > best) {
        best = v;
        best_r = r;
        best_a = a;
      }
    }
  }
  double dr = rho / radii;
  double da = 2.0 * std::numbers::pi / angles;
  for (int round = 0; round < 6; ++round) {
    const double r0 = best_r;
    const double a0 = best_a;
    for (int i = -5; i <= 5; ++i) {
      const double r = std::clamp(r0 + dr * i / 5.0, 0.0, rho);
      for (int k = -5; k <= 5; ++k) {
        const double a = a0 + da * k / 5.0;
        const double v = f(x + r * std::cos(a), y + r * std::sin(a)) - base;
        if (v > best) {
          best = v;
          best_r = r;
          best_a = a;
        }
      }
    }
    dr /= 5.0;
    da /= 5.0;
  }
  return best;
}

inline double kl(const std::array<double, 3>& q, const std::array<double, 3>& p) {
  double s = 0.0;
  for (int i = 0; i < 3; ++i) {
    if (q[i] > 0.0) s += q[i] * std::log(q[i] / p[i]);
  }
  return s;
}

inline double tv(const std::array<double, 3>& q, const std::array<double, 3>& p) {
  double s = 0.0;
  for (int i = 0; i < 3; ++i) s += std::abs(q[i] - p[i]);
  return 0.5 * s;
}

/// W1 between two distributions on sorted points of the real line, via the CDF formula.
inline double w1_line(const std::vector<double>& q, const std::vector<double>& p,
                      const std::vector<double>& xs) {
  double fq = 0.0;
  double fp = 0.0;
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    fq += q[i];
    fp += p[i];
    s += std::abs(fq - fp) * (xs[i + 1] - xs[i]);
  }
  return s;
}

/// sup over the 2-simplex of <losses, q> subject to div(q) <= delta, for a strictly positive
/// reference p. Coarse simplex grid, then a ray sweep from p with each ray cut at the ball
/// boundary by bisection, then angular refinement.
inline double simplex_grid_max(const std::array<double, 3>& losses, const std::array<double, 3>& p,
                               const std::function<double(const std::array<double, 3>&)>& div,
                               double delta, int n = 300) {
  auto value = [&](const std::array<double, 3>& q) {
    return losses[0] * q[0] + losses[1] * q[1] + losses[2] * q[2];
  };
  double best = value(p);
  for (int i = 0; i <= n; ++i) {
    for (int j = 0; j + i <= n; ++j) {
      const double a = static_cast<double>(i) / n;
      const double b = static_cast<double>(j) / n;
      const std::array<double, 3> q{a, b, std::max(0.0, 1.0 - a - b)};
      if (div(q) <= delta) best = std::max(best, value(q));
    }
  }

  const std::array<double, 3> u1{1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0), 0.0};
  const std::array<double, 3> u2{1.0 / std::sqrt(6.0), 1.0 / std::sqrt(6.0), -2.0 / std::sqrt(6.0)};
  auto ray = [&](double phi) {
    std::array<double, 3> d{};
    for (int k = 0; k < 3; ++k) d[k] = std::cos(phi) * u1[k] + std::sin(phi) * u2[k];
    double r_edge = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 3; ++k) {
      if (d[k] < 0.0) r_edge = std::min(r_edge, p[k] / -d[k]);
    }
    auto at = [&](double r) {
      std::array<double, 3> q{};
      for (int k = 0; k < 3; ++k) q[k] = std::max(0.0, p[k] + r * d[k]);
      const double s = q[0] + q[1] + q[2];
      for (auto& v : q) v /= s;
      return q;
    };
    double lo = 0.0;
    double hi = r_edge;
    if (div(at(hi)) <= delta) {
      lo = hi;
    } else {
      for (int it = 0; it < 100; ++it) {
        const double mid = 0.5 * (lo + hi);
        (div(at(mid)) <= delta ? lo : hi) = mid;
      }
    }
    return std::max(value(p), value(at(lo)));
  };
  const int angles = 7200;
  double best_phi = 0.0;
  double best_ray = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < angles; ++k) {
    const double phi = 2.0 * std::numbers::pi * k / angles;
    const double v = ray(phi);
    if (v > best_ray) {
      best_ray = v;
      best_phi = phi;
    }
  }
  double h = 2.0 * std::numbers::pi / angles;
  for (int round = 0; round < 12; ++round) {
    const double phi0 = best_phi;
    for (int k = -8; k <= 8; ++k) {
      const double v = ray(phi0 + h * k / 4.0);
      if (v > best_ray) {
        best_ray = v;
        best_phi = phi0 + h * k / 4.0;
      }
    }
    h /= 4.0;
  }
  return std::max(best, best_ray);
}

struct ConvergenceOracle {
  double T = 0.0;
  std::uint64_t T_int = 0;
  double gamma = 0.0;
  double rho = 0.0;
};

/// Straight transcription of the stationarity budget: T from the gamma-free arms, then gamma
/// at that T, then enlarge T until T >= 12 M4 / (eps^2 S gamma).
inline ConvergenceOracle convergence_oracle(double L, double M1, double M2, double M3, double M4,
                                            double S, double eps) {
  const double inf = std::numeric_limits<double>::infinity();
  ConvergenceOracle o;
  o.T = 12.0 * M4 / (eps * eps * S) *
        std::max({1.0, 24.0 * M1 * M4 * S * L / (eps * eps), 4.0 * M2 * L, 12.0 * M3 * S * L});
  auto gamma_at = [&](double T) {
    const double a = M1 > 0 ? 1.0 / (S * std::sqrt(2.0 * M1 * L * T)) : inf;
    const double b = M2 > 0 ? 1.0 / (4.0 * M2 * L) : inf;
    const double c = M3 > 0 ? eps * eps / (12.0 * M3 * S * L) : inf;
    return std::min({1.0, a, b, c});
  };
  for (int k = 0; k < 50; ++k) {
    o.gamma = gamma_at(o.T);
    const double need = 12.0 * M4 / (eps * eps * S * o.gamma);
    if (o.T >= need * (1.0 - 1e-12)) break;
    o.T = need;
  }
  o.T_int = static_cast<std::uint64_t>(std::ceil(o.T * (1.0 - 1e-12)));
  o.rho = 1.0 / (S * L) * std::min({1.0, eps * eps / 12.0, eps / (2.0 * std::sqrt(6.0 * L))});
  return o;
}

}  // namespace oracle
