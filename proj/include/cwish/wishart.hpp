#pragma once

#include "cwish/linalg.hpp"
#include "cwish/rng.hpp"
#include "cwish/shape.hpp"

#include <vector>

namespace cwish {

/// One compound Wishart law W = (1/n) X B X^T with columns of X ~ N(0, Θ).
class WishartModel {
 public:
  WishartModel(Eigen::Index p, Eigen::Index n, SpdMatrix theta,
               ShapeMatrixSpec shape);

  Eigen::Index p() const noexcept { return p_; }
  Eigen::Index n() const noexcept { return n_; }
  const SpdMatrix& theta() const noexcept { return theta_; }
  const ShapeMatrixSpec& shape_spec() const noexcept { return spec_; }
  const ShapeMatrix& shape() const noexcept { return shape_; }

  /// Same law with Θ replaced.
  WishartModel with_theta(SpdMatrix theta) const;

 private:
  Eigen::Index p_;
  Eigen::Index n_;
  SpdMatrix theta_;
  ShapeMatrixSpec spec_;
  ShapeMatrix shape_;
};

/// Substream tags under a sampling seed.
inline constexpr std::uint64_t kStreamY = 0;
inline constexpr std::uint64_t kStreamYPrime = 1;

/// (1/n) Θ^{1/2} Y B Y^T Θ^{1/2}, Y standard Gaussian from substream 0.
DenseMatrix sample_wishart(const WishartModel& model, RngSeed seed);

/// (1/n) Θ^{1/2} Y' B Y^T Θ^{1/2}; Y from substream 0 (shared with
/// sample_wishart under the same seed), Y' from substream 1.
DenseMatrix sample_decoupled(const WishartModel& model, RngSeed seed);

/// (Tr B / n) Θ.
DenseMatrix expected_wishart(const WishartModel& model);

/// Sequence {W_n : n in index_set} sharing p and Θ.
struct WishartSequenceSpec {
  Eigen::Index p;
  SpdMatrix theta;
  std::vector<Eigen::Index> index_set;
  ShapeFamily family;
  double beta = 1.0;

  /// Throws AssumptionViolationError unless Tr(B_n)/n = beta for every n in
  /// the index set and the index set is nonempty and strictly increasing.
  void validate() const;
  /// beta == 1.
  bool is_normalized() const noexcept { return beta == 1.0; }
  WishartModel model_at(Eigen::Index n) const;
};

}  // namespace cwish
