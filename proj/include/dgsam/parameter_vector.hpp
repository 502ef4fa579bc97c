#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace dgsam {

/// Dense real vector used for parameters, perturbations and gradients.
///
/// The dimension is fixed at construction. Arithmetic between vectors of
/// different dimension throws DimensionError; any operation that would leave a
/// non-finite element throws NumericError.
class ParameterVector {
 public:
  ParameterVector() = default;
  explicit ParameterVector(std::size_t dim, double fill = 0.0);
  ParameterVector(std::initializer_list<double> values);
  explicit ParameterVector(std::vector<double> values);

  static ParameterVector zeros(std::size_t dim) { return ParameterVector(dim); }
  static ParameterVector unit(std::size_t dim, std::size_t axis);

  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }

  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }

  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }
  const std::vector<double>& data() const { return values_; }

  ParameterVector& operator+=(const ParameterVector& other);
  ParameterVector& operator-=(const ParameterVector& other);
  ParameterVector& operator*=(double scale);

  bool operator==(const ParameterVector& other) const = default;

  /// Throws NumericError naming the first non-finite element.
  void check_finite(const char* context) const;

 private:
  std::vector<double> values_;
};

ParameterVector operator+(ParameterVector a, const ParameterVector& b);
ParameterVector operator-(ParameterVector a, const ParameterVector& b);
ParameterVector operator*(double scale, ParameterVector a);
ParameterVector operator*(ParameterVector a, double scale);

double dot(const ParameterVector& a, const ParameterVector& b);
double norm2(const ParameterVector& a);
double norm_inf(const ParameterVector& a);

/// alpha * x + y, inputs untouched.
ParameterVector axpy(double alpha, const ParameterVector& x, const ParameterVector& y);

void require_same_dimension(const ParameterVector& a, const ParameterVector& b,
                            const char* context);

}  // namespace dgsam
