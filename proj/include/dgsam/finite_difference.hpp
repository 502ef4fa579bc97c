#pragma once

#include <functional>

#include "dgsam/parameter_vector.hpp"

namespace dgsam {

using ScalarFunction = std::function<double(const ParameterVector&)>;
using VectorFunction = std::function<ParameterVector(const ParameterVector&)>;

/// 1e-5 * (1 + |theta|_inf).
double default_fd_step(const ParameterVector& theta);

/// Central-difference gradient. Throws NumericError naming the component
/// whose stencil produced a non-finite value.
ParameterVector finite_diff_gradient(const ScalarFunction& f, const ParameterVector& theta,
                                     double h);
ParameterVector finite_diff_gradient(const ScalarFunction& f, const ParameterVector& theta);

/// (grad(theta + h v) - grad(theta - h v)) / (2h).
ParameterVector finite_diff_hvp(const VectorFunction& grad, const ParameterVector& theta,
                                const ParameterVector& v, double h);

/// |a - b| / max(|a|, |b|, floor), measured in the Euclidean norm.
double relative_error(const ParameterVector& a, const ParameterVector& b, double floor = 1e-8);

}  // namespace dgsam
