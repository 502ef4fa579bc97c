#include "dgsam/seeded_rng.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "dgsam/errors.hpp"

namespace dgsam {

SeededRng::SeededRng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

double SeededRng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double SeededRng::normal() {
  if (has_spare_normal_) {
    has_spare_normal_ = false;
    return spare_normal_;
  }
  // Box-Muller; 1 - u keeps the log argument in (0, 1].
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_normal_ = r * std::sin(angle);
  has_spare_normal_ = true;
  return r * std::cos(angle);
}

std::size_t SeededRng::index(std::size_t n) {
  if (n == 0) throw ConfigError("SeededRng::index: empty range");
  // Rejection sampling removes modulo bias.
  const std::uint64_t range = static_cast<std::uint64_t>(n);
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % range;
  std::uint64_t draw = engine_();
  while (draw >= limit) draw = engine_();
  return static_cast<std::size_t>(draw % range);
}

std::vector<std::size_t> SeededRng::permutation(std::size_t n) {
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  for (std::size_t i = n; i > 1; --i) std::swap(perm[i - 1], perm[index(i)]);
  return perm;
}

std::vector<std::size_t> SeededRng::sample_without_replacement(std::size_t n, std::size_t k) {
  if (k > n) throw ConfigError("sample_without_replacement: k exceeds population");
  std::vector<std::size_t> pool(n);
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  // Partial Fisher-Yates.
  for (std::size_t i = 0; i < k; ++i) std::swap(pool[i], pool[i + index(n - i)]);
  pool.resize(k);
  return pool;
}

ParameterVector SeededRng::normal_vector(std::size_t dim) {
  std::vector<double> v(dim);
  for (double& x : v) x = normal();
  return ParameterVector(std::move(v));
}

ParameterVector SeededRng::rademacher_vector(std::size_t dim) {
  std::vector<double> v(dim);
  for (double& x : v) x = (engine_() >> 63) ? 1.0 : -1.0;
  return ParameterVector(std::move(v));
}

ParameterVector SeededRng::unit_sphere(std::size_t dim) {
  for (;;) {
    ParameterVector v = normal_vector(dim);
    const double n = norm2(v);
    if (n > 1e-300) return (1.0 / n) * v;
  }
}

SeededRng SeededRng::split() {
  // SplitMix64 finalizer decorrelates the child seed from the parent stream.
  std::uint64_t z = engine_() + 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return SeededRng(z ^ (z >> 31));
}

}  // namespace dgsam
