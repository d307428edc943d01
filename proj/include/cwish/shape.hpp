#pragma once

#include "cwish/linalg.hpp"
#include "cwish/rng.hpp"

#include <string>
#include <variant>
#include <vector>

namespace cwish {

struct IdentityShape {};
struct DiagonalShape {
  std::vector<double> entries;
};
/// [[0, I_{n/2}], [-I_{n/2}, 0]], n even.
struct SkewBlockShape {};
struct CustomShape {
  DenseMatrix matrix;
};

/// Declarative shape parameter B. Identity and SkewBlock take their size
/// from the model; Diagonal and Custom carry it.
using ShapeMatrixSpec =
    std::variant<IdentityShape, DiagonalShape, SkewBlockShape, CustomShape>;

/// "identity", "diagonal", "skew_block" or "custom".
std::string shape_variant_name(const ShapeMatrixSpec& spec);

/// Realized n x n shape matrix, stored by structure so that products and
/// norms stay O(n) for the identity, diagonal and skew-block variants.
class ShapeMatrix {
 public:
  enum class Kind { Diagonal, SkewBlock, Dense };

  static ShapeMatrix diagonal(Vector d);
  static ShapeMatrix skew_block(Eigen::Index n);
  static ShapeMatrix dense(DenseMatrix b);

  Kind kind() const noexcept { return kind_; }
  Eigen::Index size() const noexcept { return n_; }

  DenseMatrix to_dense() const;
  /// Y · B for Y with size() columns.
  DenseMatrix right_multiply(const DenseMatrix& y) const;
  /// B · v.
  Vector apply(const Vector& v) const;

  double trace() const;
  double spectral_norm() const;
  double frobenius_norm() const;
  bool is_zero() const;

 private:
  ShapeMatrix(Kind kind, Eigen::Index n) : kind_(kind), n_(n) {}

  Kind kind_;
  Eigen::Index n_;
  Vector diag_;
  DenseMatrix dense_;
};

/// Throws ShapeParityError for SkewBlock with odd n and DimensionError when a
/// Diagonal or Custom spec does not have size n.
ShapeMatrix realize_shape(const ShapeMatrixSpec& spec, Eigen::Index n);
DenseMatrix build_shape(const ShapeMatrixSpec& spec, Eigen::Index n);

/// Rule n -> ShapeMatrixSpec used by sequences, sweeps and bound inversion.
class ShapeFamily {
 public:
  enum class Kind { Identity, SkewBlock, SeededDiagonal, Zero };

  static ShapeFamily identity() { return ShapeFamily(Kind::Identity, {}); }
  static ShapeFamily skew_block() { return ShapeFamily(Kind::SkewBlock, {}); }
  /// Positive diagonal entries drawn from the seed and rescaled so Tr = n.
  static ShapeFamily seeded_diagonal(RngSeed seed) {
    return ShapeFamily(Kind::SeededDiagonal, seed);
  }
  static ShapeFamily zero() { return ShapeFamily(Kind::Zero, {}); }

  Kind kind() const noexcept { return kind_; }
  RngSeed seed() const noexcept { return seed_; }
  std::string name() const;

  /// Admissible sizes are the positive multiples of step().
  Eigen::Index step() const noexcept { return kind_ == Kind::SkewBlock ? 2 : 1; }
  ShapeMatrixSpec spec_for(Eigen::Index n) const;

 private:
  ShapeFamily(Kind kind, RngSeed seed) : kind_(kind), seed_(seed) {}
  Kind kind_;
  RngSeed seed_;
};

struct TraceCheck {
  double scaled_trace;
  bool normalized;
};

inline constexpr double kTraceTolerance = 1e-12;

/// Tr(B)/n and whether it equals 1 within kTraceTolerance.
TraceCheck check_trace_normalization(const DenseMatrix& b, Eigen::Index n);
TraceCheck check_trace_normalization(const ShapeMatrix& b);

}  // namespace cwish
