#pragma once

#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dgsam/finite_support_loss.hpp"

namespace dgsam {

enum class Divergence { KL, TV, W1 };

std::string to_string(Divergence kind);
/// Accepts "kl", "tv", "w1" (case-insensitive).
Divergence divergence_from_string(const std::string& name);

/// Parameter-space radius that dominates a distribution shift of size delta:
///   KL: (M/G) sqrt(delta/2),  TV: (M/G) delta,  W1: (Lx/G) delta.
double rho_of_delta(double M, double G, double Lx, Divergence kind, double delta);

/// KL(q || p) = sum q log(q/p); +inf when q puts mass where p has none.
double kl_divergence(const std::vector<double>& q, const std::vector<double>& p);
/// Half the L1 distance.
double tv_distance(const std::vector<double>& q, const std::vector<double>& p);
/// Optimal-transport cost between q and p under the ground metric (exact LP).
double w1_distance(const std::vector<double>& q, const std::vector<double>& p,
                   const Eigen::MatrixXd& metric);

/// All distributions q on the base support with Div(q || p) <= delta.
struct UncertaintySet {
  std::shared_ptr<const FiniteSupportStatLoss> base;
  Divergence kind = Divergence::KL;
  double delta = 0.0;

  void validate() const;
  double divergence_from_base(const std::vector<double>& q) const;
  bool contains(const std::vector<double>& q, double tol = 1e-10) const;
};

}  // namespace dgsam
