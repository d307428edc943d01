#pragma once

#include "cwish/linalg.hpp"

#include <cstdint>
#include <random>

namespace cwish {

struct RngSeed {
  std::uint64_t value = 0;
  friend bool operator==(RngSeed, RngSeed) = default;
};

/// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Independent substream seed: mix64(seed + (tag + 1) * golden).
RngSeed derive_seed(RngSeed seed, std::uint64_t tag) noexcept;

/// Standard normal draws: mt19937_64 seeded with mix64(seed), uniforms from
/// the top 53 bits, Box–Muller consuming two uniforms per pair of normals.
class GaussianStream {
 public:
  explicit GaussianStream(RngSeed seed);

  double next();
  /// Uniform on [0, 1).
  double uniform();
  Vector vector(Eigen::Index size);

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// p x n matrix of i.i.d. N(0, 1), filled in row-major order.
DenseMatrix sample_standard_gaussian_matrix(Eigen::Index p, Eigen::Index n,
                                            RngSeed seed);

}  // namespace cwish
