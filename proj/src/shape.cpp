#include "cwish/shape.hpp"

#include "cwish/errors.hpp"

#include <cmath>
#include <sstream>

namespace cwish {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

}  // namespace

std::string shape_variant_name(const ShapeMatrixSpec& spec) {
  return std::visit(overloaded{
                        [](const IdentityShape&) { return std::string("identity"); },
                        [](const DiagonalShape&) { return std::string("diagonal"); },
                        [](const SkewBlockShape&) { return std::string("skew_block"); },
                        [](const CustomShape&) { return std::string("custom"); },
                    },
                    spec);
}

ShapeMatrix ShapeMatrix::diagonal(Vector d) {
  if (!d.allFinite()) throw InvalidInputError("diagonal shape: entries must be finite");
  ShapeMatrix m(Kind::Diagonal, d.size());
  m.diag_ = std::move(d);
  return m;
}

ShapeMatrix ShapeMatrix::skew_block(Eigen::Index n) {
  if (n % 2 != 0 || n <= 0) {
    std::ostringstream msg;
    msg << "skew_block shape requires even n, got n = " << n;
    throw ShapeParityError(msg.str());
  }
  return ShapeMatrix(Kind::SkewBlock, n);
}

ShapeMatrix ShapeMatrix::dense(DenseMatrix b) {
  if (b.rows() != b.cols()) throw DimensionError("shape matrix must be square");
  require_finite(b, "shape matrix");
  ShapeMatrix m(Kind::Dense, b.rows());
  m.dense_ = std::move(b);
  return m;
}

DenseMatrix ShapeMatrix::to_dense() const {
  switch (kind_) {
    case Kind::Diagonal:
      return DenseMatrix(diag_.asDiagonal());
    case Kind::SkewBlock: {
      const Eigen::Index h = n_ / 2;
      DenseMatrix b = DenseMatrix::Zero(n_, n_);
      b.topRightCorner(h, h).setIdentity();
      b.bottomLeftCorner(h, h) = -DenseMatrix::Identity(h, h);
      return b;
    }
    case Kind::Dense:
      return dense_;
  }
  return {};
}

DenseMatrix ShapeMatrix::right_multiply(const DenseMatrix& y) const {
  if (y.cols() != n_) throw DimensionError("right_multiply: column count must equal n");
  switch (kind_) {
    case Kind::Diagonal:
      return y * diag_.asDiagonal();
    case Kind::SkewBlock: {
      // [Y1 Y2] B = [-Y2, Y1]
      const Eigen::Index h = n_ / 2;
      DenseMatrix out(y.rows(), n_);
      out.leftCols(h) = -y.rightCols(h);
      out.rightCols(h) = y.leftCols(h);
      return out;
    }
    case Kind::Dense:
      return y * dense_;
  }
  return {};
}

Vector ShapeMatrix::apply(const Vector& v) const {
  if (v.size() != n_) throw DimensionError("apply: vector length must equal n");
  switch (kind_) {
    case Kind::Diagonal:
      return diag_.cwiseProduct(v);
    case Kind::SkewBlock: {
      const Eigen::Index h = n_ / 2;
      Vector out(n_);
      out.head(h) = v.tail(h);
      out.tail(h) = -v.head(h);
      return out;
    }
    case Kind::Dense:
      return dense_ * v;
  }
  return {};
}

double ShapeMatrix::trace() const {
  switch (kind_) {
    case Kind::Diagonal:
      return diag_.sum();
    case Kind::SkewBlock:
      return 0.0;
    case Kind::Dense:
      return dense_.trace();
  }
  return 0.0;
}

double ShapeMatrix::spectral_norm() const {
  switch (kind_) {
    case Kind::Diagonal:
      return diag_.size() == 0 ? 0.0 : diag_.cwiseAbs().maxCoeff();
    case Kind::SkewBlock:
      return 1.0;
    case Kind::Dense:
      return cwish::spectral_norm(dense_);
  }
  return 0.0;
}

double ShapeMatrix::frobenius_norm() const {
  switch (kind_) {
    case Kind::Diagonal:
      return diag_.norm();
    case Kind::SkewBlock:
      return std::sqrt(static_cast<double>(n_));
    case Kind::Dense:
      return dense_.norm();
  }
  return 0.0;
}

bool ShapeMatrix::is_zero() const {
  switch (kind_) {
    case Kind::Diagonal:
      return diag_.isZero(0.0);
    case Kind::SkewBlock:
      return false;
    case Kind::Dense:
      return dense_.isZero(0.0);
  }
  return false;
}

ShapeMatrix realize_shape(const ShapeMatrixSpec& spec, Eigen::Index n) {
  if (n <= 0) throw InvalidInputError("shape size n must be positive");
  return std::visit(
      overloaded{
          [n](const IdentityShape&) { return ShapeMatrix::diagonal(Vector::Ones(n)); },
          [n](const DiagonalShape& d) {
            if (static_cast<Eigen::Index>(d.entries.size()) != n) {
              std::ostringstream msg;
              msg << "diagonal shape has " << d.entries.size() << " entries, expected " << n;
              throw DimensionError(msg.str());
            }
            return ShapeMatrix::diagonal(
                Eigen::Map<const Vector>(d.entries.data(), static_cast<Eigen::Index>(d.entries.size())));
          },
          [n](const SkewBlockShape&) { return ShapeMatrix::skew_block(n); },
          [n](const CustomShape& c) {
            if (c.matrix.rows() != n || c.matrix.cols() != n) {
              std::ostringstream msg;
              msg << "custom shape is " << c.matrix.rows() << "x" << c.matrix.cols()
                  << ", expected " << n << "x" << n;
              throw DimensionError(msg.str());
            }
            return ShapeMatrix::dense(c.matrix);
          },
      },
      spec);
}

DenseMatrix build_shape(const ShapeMatrixSpec& spec, Eigen::Index n) {
  return realize_shape(spec, n).to_dense();
}

std::string ShapeFamily::name() const {
  switch (kind_) {
    case Kind::Identity:
      return "identity";
    case Kind::SkewBlock:
      return "skew_block";
    case Kind::SeededDiagonal:
      return "seeded_diagonal";
    case Kind::Zero:
      return "zero";
  }
  return {};
}

ShapeMatrixSpec ShapeFamily::spec_for(Eigen::Index n) const {
  switch (kind_) {
    case Kind::Identity:
      return IdentityShape{};
    case Kind::SkewBlock:
      return SkewBlockShape{};
    case Kind::Zero:
      return DiagonalShape{std::vector<double>(static_cast<std::size_t>(n), 0.0)};
    case Kind::SeededDiagonal: {
      GaussianStream stream(derive_seed(seed_, static_cast<std::uint64_t>(n)));
      std::vector<double> d(static_cast<std::size_t>(n));
      double total = 0.0;
      for (auto& e : d) {
        e = 0.1 + stream.uniform();
        total += e;
      }
      const double scale = static_cast<double>(n) / total;
      for (auto& e : d) e *= scale;
      return DiagonalShape{std::move(d)};
    }
  }
  return IdentityShape{};
}

TraceCheck check_trace_normalization(const DenseMatrix& b, Eigen::Index n) {
  if (b.rows() != b.cols()) throw DimensionError("trace normalization: B must be square");
  if (b.rows() != n) throw DimensionError("trace normalization: B must be n x n");
  const double scaled = b.trace() / static_cast<double>(n);
  return {scaled, std::abs(scaled - 1.0) <= kTraceTolerance};
}

TraceCheck check_trace_normalization(const ShapeMatrix& b) {
  const double scaled = b.trace() / static_cast<double>(b.size());
  return {scaled, std::abs(scaled - 1.0) <= kTraceTolerance};
}

}  // namespace cwish
