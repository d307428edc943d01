#include "cwish/rng.hpp"

#include <cmath>
#include <numbers>

namespace cwish {

std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

RngSeed derive_seed(RngSeed seed, std::uint64_t tag) noexcept {
  return RngSeed{mix64(seed.value + (tag + 1) * 0x9E3779B97F4A7C15ULL)};
}

GaussianStream::GaussianStream(RngSeed seed) : engine_(mix64(seed.value)) {}

double GaussianStream::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double GaussianStream::next() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = 1.0 - uniform();  // (0, 1]
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

Vector GaussianStream::vector(Eigen::Index size) {
  Vector v(size);
  for (Eigen::Index i = 0; i < size; ++i) v(i) = next();
  return v;
}

DenseMatrix sample_standard_gaussian_matrix(Eigen::Index p, Eigen::Index n, RngSeed seed) {
  GaussianStream stream(seed);
  DenseMatrix m(p, n);
  for (Eigen::Index i = 0; i < p; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = stream.next();
  }
  return m;
}

}  // namespace cwish
