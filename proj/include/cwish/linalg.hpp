#pragma once

#include <Eigen/Dense>

#include <cstddef>

namespace cwish {

/// General rectangular real matrix. Column-major in memory (Eigen default);
/// every serialized form is row-major.
using DenseMatrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Throws InvalidInputError if any entry is NaN or infinite.
void require_finite(const DenseMatrix& a, const char* what);

/// Largest singular value. Symmetric eigensolve of the smaller Gram matrix
/// when min(rows, cols) <= kSpectralExactLimit, power iteration otherwise.
double spectral_norm(const DenseMatrix& a);
double frobenius_norm(const DenseMatrix& a);

inline constexpr Eigen::Index kSpectralExactLimit = 64;
inline constexpr double kPowerIterationTolerance = 1e-12;
inline constexpr int kPowerIterationCap = 10000;

/// Power iteration on the Gram matrix; exposed so tests can exercise it at
/// small sizes against the exact path.
double spectral_norm_power(const DenseMatrix& a);

inline constexpr double kDefaultPositivityTolerance = 1e-10;

/// Symmetric positive definite matrix. Positivity is certified at
/// construction by a full eigendecomposition, which also yields the square
/// root.
class SpdMatrix {
 public:
  /// Throws DimensionError if not square, InvalidInputError if non-finite or
  /// not symmetric, NotPositiveDefiniteError if the smallest eigenvalue is
  /// <= tolerance.
  explicit SpdMatrix(DenseMatrix entries,
                     double tolerance = kDefaultPositivityTolerance);

  static SpdMatrix identity(Eigen::Index p);
  static SpdMatrix diagonal(const Vector& d);

  Eigen::Index dim() const noexcept { return entries_.rows(); }
  const DenseMatrix& matrix() const noexcept { return entries_; }
  const DenseMatrix& sqrt_matrix() const noexcept { return sqrt_; }
  double min_eigenvalue() const noexcept { return min_eigenvalue_; }
  double max_eigenvalue() const noexcept { return max_eigenvalue_; }
  bool is_identity() const noexcept { return is_identity_; }

 private:
  DenseMatrix entries_;
  DenseMatrix sqrt_;
  double min_eigenvalue_ = 0.0;
  double max_eigenvalue_ = 0.0;
  bool is_identity_ = false;
};

/// Symmetric square root R with R·R = S, R positive definite.
SpdMatrix spd_sqrt(const SpdMatrix& s);

}  // namespace cwish
