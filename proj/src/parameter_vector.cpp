#include "dgsam/parameter_vector.hpp"

#include <cmath>
#include <string>

#include "dgsam/errors.hpp"

namespace dgsam {

ParameterVector::ParameterVector(std::size_t dim, double fill) : values_(dim, fill) {
  check_finite("ParameterVector");
}

ParameterVector::ParameterVector(std::initializer_list<double> values) : values_(values) {
  check_finite("ParameterVector");
}

ParameterVector::ParameterVector(std::vector<double> values) : values_(std::move(values)) {
  check_finite("ParameterVector");
}

ParameterVector ParameterVector::unit(std::size_t dim, std::size_t axis) {
  if (axis >= dim) throw DimensionError("unit: axis out of range");
  ParameterVector e(dim);
  e[axis] = 1.0;
  return e;
}

void ParameterVector::check_finite(const char* context) const {
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      throw NumericError(std::string(context) + ": non-finite element at index " +
                         std::to_string(i));
    }
  }
}

void require_same_dimension(const ParameterVector& a, const ParameterVector& b,
                            const char* context) {
  if (a.size() != b.size()) {
    throw DimensionError(std::string(context) + ": dimension mismatch (" +
                         std::to_string(a.size()) + " vs " + std::to_string(b.size()) + ")");
  }
}

ParameterVector& ParameterVector::operator+=(const ParameterVector& other) {
  require_same_dimension(*this, other, "operator+=");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  check_finite("operator+=");
  return *this;
}

ParameterVector& ParameterVector::operator-=(const ParameterVector& other) {
  require_same_dimension(*this, other, "operator-=");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
  check_finite("operator-=");
  return *this;
}

ParameterVector& ParameterVector::operator*=(double scale) {
  for (double& v : values_) v *= scale;
  check_finite("operator*=");
  return *this;
}

ParameterVector operator+(ParameterVector a, const ParameterVector& b) { return a += b; }
ParameterVector operator-(ParameterVector a, const ParameterVector& b) { return a -= b; }
ParameterVector operator*(double scale, ParameterVector a) { return a *= scale; }
ParameterVector operator*(ParameterVector a, double scale) { return a *= scale; }

double dot(const ParameterVector& a, const ParameterVector& b) {
  require_same_dimension(a, b, "dot");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
  return sum;
}

double norm2(const ParameterVector& a) {
  // Scaled accumulation so huge/tiny entries do not overflow the square.
  double scale = 0.0;
  double ssq = 1.0;
  for (double v : a.values()) {
    if (v == 0.0) continue;
    const double av = std::abs(v);
    if (scale < av) {
      ssq = 1.0 + ssq * (scale / av) * (scale / av);
      scale = av;
    } else {
      ssq += (av / scale) * (av / scale);
    }
  }
  return scale * std::sqrt(ssq);
}

double norm_inf(const ParameterVector& a) {
  double m = 0.0;
  for (double v : a.values()) m = std::max(m, std::abs(v));
  return m;
}

ParameterVector axpy(double alpha, const ParameterVector& x, const ParameterVector& y) {
  require_same_dimension(x, y, "axpy");
  if (!std::isfinite(alpha)) throw NumericError("axpy: non-finite alpha");
  std::vector<double> out(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) out[i] = alpha * x[i] + y[i];
  return ParameterVector(std::move(out));
}

}  // namespace dgsam
