#include "cwish/linalg.hpp"

#include "cwish/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

namespace cwish {

void require_finite(const DenseMatrix& a, const char* what) {
  if (!a.allFinite()) {
    throw InvalidInputError(std::string(what) + ": matrix has non-finite entries");
  }
}

namespace {

DenseMatrix smaller_gram(const DenseMatrix& a) {
  if (a.rows() < a.cols()) return a * a.transpose();
  return a.transpose() * a;
}

}  // namespace

double spectral_norm_power(const DenseMatrix& a) {
  require_finite(a, "spectral_norm");
  if (a.size() == 0) return 0.0;
  const DenseMatrix gram = smaller_gram(a);
  const Eigen::Index m = gram.rows();

  // Fixed, non-degenerate start so the result is deterministic.
  Vector v(m);
  for (Eigen::Index i = 0; i < m; ++i) v(i) = 1.0 + 0.5 * std::sin(1.0 + static_cast<double>(i));
  v.normalize();

  double lambda = 0.0;
  for (int iter = 0; iter < kPowerIterationCap; ++iter) {
    Vector w = gram * v;
    const double norm = w.norm();
    if (norm == 0.0) return 0.0;
    const double next = v.dot(w);
    v = w / norm;
    if (std::abs(next - lambda) <= kPowerIterationTolerance * std::max(1.0, std::abs(next))) {
      lambda = next;
      break;
    }
    lambda = next;
  }
  // Rayleigh quotient at the final iterate.
  lambda = std::max(lambda, v.dot(gram * v));
  return std::sqrt(std::max(lambda, 0.0));
}

double spectral_norm(const DenseMatrix& a) {
  require_finite(a, "spectral_norm");
  if (a.size() == 0) return 0.0;
  if (std::min(a.rows(), a.cols()) > kSpectralExactLimit) return spectral_norm_power(a);
  const DenseMatrix gram = smaller_gram(a);
  Eigen::SelfAdjointEigenSolver<DenseMatrix> solver(gram, Eigen::EigenvaluesOnly);
  const double top = solver.eigenvalues().maxCoeff();
  return std::sqrt(std::max(top, 0.0));
}

double frobenius_norm(const DenseMatrix& a) {
  require_finite(a, "frobenius_norm");
  return a.norm();
}

SpdMatrix::SpdMatrix(DenseMatrix entries, double tolerance) : entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols() || entries_.rows() == 0) {
    throw DimensionError("SpdMatrix: matrix must be square and nonempty");
  }
  require_finite(entries_, "SpdMatrix");
  const Eigen::Index p = entries_.rows();
  for (Eigen::Index i = 0; i < p; ++i) {
    for (Eigen::Index j = i + 1; j < p; ++j) {
      const double e = entries_(i, j);
      if (std::abs(e - entries_(j, i)) > 1e-12 * std::max(1.0, std::abs(e))) {
        std::ostringstream msg;
        msg << "SpdMatrix: not symmetric at (" << i << ", " << j << ")";
        throw InvalidInputError(msg.str());
      }
    }
  }

  is_identity_ = entries_.isIdentity(0.0);
  if (is_identity_) {
    sqrt_ = entries_;
    min_eigenvalue_ = max_eigenvalue_ = 1.0;
    return;
  }

  Eigen::SelfAdjointEigenSolver<DenseMatrix> solver(entries_);
  const Vector& eig = solver.eigenvalues();
  min_eigenvalue_ = eig.minCoeff();
  max_eigenvalue_ = eig.maxCoeff();
  if (!(min_eigenvalue_ > tolerance)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "matrix is not positive definite: minimal eigenvalue " << min_eigenvalue_
        << " <= tolerance " << tolerance;
    throw NotPositiveDefiniteError(msg.str(), min_eigenvalue_);
  }
  const DenseMatrix& vecs = solver.eigenvectors();
  sqrt_ = vecs * eig.cwiseSqrt().asDiagonal() * vecs.transpose();
  sqrt_ = 0.5 * (sqrt_ + sqrt_.transpose()).eval();
}

SpdMatrix SpdMatrix::identity(Eigen::Index p) {
  return SpdMatrix(DenseMatrix::Identity(p, p));
}

SpdMatrix SpdMatrix::diagonal(const Vector& d) {
  return SpdMatrix(DenseMatrix(d.asDiagonal()));
}

SpdMatrix spd_sqrt(const SpdMatrix& s) {
  return SpdMatrix(s.sqrt_matrix());
}

}  // namespace cwish
