#include "dgsam/finite_difference.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dgsam/errors.hpp"

namespace dgsam {

double default_fd_step(const ParameterVector& theta) { return 1e-5 * (1.0 + norm_inf(theta)); }

ParameterVector finite_diff_gradient(const ScalarFunction& f, const ParameterVector& theta,
                                     double h) {
  if (!(h > 0.0) || !std::isfinite(h)) throw ConfigError("finite_diff_gradient: h must be > 0");
  std::vector<double> grad(theta.size());
  ParameterVector probe = theta;
  for (std::size_t i = 0; i < theta.size(); ++i) {
    probe[i] = theta[i] + h;
    const double up = f(probe);
    probe[i] = theta[i] - h;
    const double down = f(probe);
    probe[i] = theta[i];
    if (!std::isfinite(up) || !std::isfinite(down)) {
      throw NumericError("finite_diff_gradient: non-finite function value at component " +
                         std::to_string(i));
    }
    grad[i] = (up - down) / (2.0 * h);
  }
  return ParameterVector(std::move(grad));
}

ParameterVector finite_diff_gradient(const ScalarFunction& f, const ParameterVector& theta) {
  return finite_diff_gradient(f, theta, default_fd_step(theta));
}

ParameterVector finite_diff_hvp(const VectorFunction& grad, const ParameterVector& theta,
                                const ParameterVector& v, double h) {
  require_same_dimension(theta, v, "finite_diff_hvp");
  const ParameterVector up = grad(axpy(h, v, theta));
  const ParameterVector down = grad(axpy(-h, v, theta));
  return (1.0 / (2.0 * h)) * (up - down);
}

double relative_error(const ParameterVector& a, const ParameterVector& b, double floor) {
  const double scale = std::max({norm2(a), norm2(b), floor});
  return norm2(a - b) / scale;
}

}  // namespace dgsam
