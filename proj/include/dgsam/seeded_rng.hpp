#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "dgsam/parameter_vector.hpp"

namespace dgsam {

/// Deterministic random source. Same seed and same call sequence give the
/// same outputs on every platform: only the raw 64-bit engine stream is taken
/// from the standard library, every distribution is computed here.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed = 0);

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform in [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal();
  /// Uniform integer in [0, n). n must be positive.
  std::size_t index(std::size_t n);
  /// Uniform permutation of {0, ..., n-1}.
  std::vector<std::size_t> permutation(std::size_t n);
  /// k distinct indices from [0, n), uniformly, in draw order.
  std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k);

  ParameterVector normal_vector(std::size_t dim);
  ParameterVector rademacher_vector(std::size_t dim);
  /// Uniform direction on the unit sphere.
  ParameterVector unit_sphere(std::size_t dim);

  /// Independent child stream; does not disturb reproducibility of the parent
  /// beyond consuming one draw.
  SeededRng split();

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  bool has_spare_normal_ = false;
  double spare_normal_ = 0.0;
};

}  // namespace dgsam
