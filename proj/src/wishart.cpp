#include "cwish/wishart.hpp"

#include "cwish/errors.hpp"

#include <cmath>
#include <sstream>

namespace cwish {

WishartModel::WishartModel(Eigen::Index p, Eigen::Index n, SpdMatrix theta, ShapeMatrixSpec shape)
    : p_(p),
      n_(n),
      theta_(std::move(theta)),
      spec_(std::move(shape)),
      shape_(realize_shape(spec_, n > 0 ? n : 1)) {
  if (p <= 0 || n <= 0) throw InvalidInputError("WishartModel: p and n must be positive");
  if (theta_.dim() != p) {
    std::ostringstream msg;
    msg << "WishartModel: theta is " << theta_.dim() << "x" << theta_.dim() << ", expected p = " << p;
    throw DimensionError(msg.str());
  }
}

WishartModel WishartModel::with_theta(SpdMatrix theta) const {
  return WishartModel(p_, n_, std::move(theta), spec_);
}

namespace {

DenseMatrix conjugate(const SpdMatrix& theta, const DenseMatrix& core) {
  if (theta.is_identity()) return core;
  const DenseMatrix& r = theta.sqrt_matrix();
  return r * core * r;
}

}  // namespace

DenseMatrix sample_wishart(const WishartModel& model, RngSeed seed) {
  const DenseMatrix y = sample_standard_gaussian_matrix(model.p(), model.n(), derive_seed(seed, kStreamY));
  DenseMatrix core = model.shape().right_multiply(y) * y.transpose();
  core /= static_cast<double>(model.n());
  return conjugate(model.theta(), core);
}

DenseMatrix sample_decoupled(const WishartModel& model, RngSeed seed) {
  const DenseMatrix y = sample_standard_gaussian_matrix(model.p(), model.n(), derive_seed(seed, kStreamY));
  const DenseMatrix y_prime =
      sample_standard_gaussian_matrix(model.p(), model.n(), derive_seed(seed, kStreamYPrime));
  DenseMatrix core = model.shape().right_multiply(y_prime) * y.transpose();
  core /= static_cast<double>(model.n());
  return conjugate(model.theta(), core);
}

DenseMatrix expected_wishart(const WishartModel& model) {
  return (model.shape().trace() / static_cast<double>(model.n())) * model.theta().matrix();
}

void WishartSequenceSpec::validate() const {
  if (index_set.empty()) throw AssumptionViolationError("sequence: index set is empty");
  if (theta.dim() != p) throw DimensionError("sequence: theta dimension must equal p");
  for (std::size_t i = 0; i < index_set.size(); ++i) {
    const Eigen::Index n = index_set[i];
    if (n <= 0 || (i > 0 && n <= index_set[i - 1])) {
      throw AssumptionViolationError("sequence: index set must be strictly increasing positive integers");
    }
    const ShapeMatrix b = realize_shape(family.spec_for(n), n);
    const double scaled = b.trace() / static_cast<double>(n);
    if (std::abs(scaled - beta) > kTraceTolerance) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "trace normalization violated (scaled traces must all equal beta = " << beta
          << "): Tr(B_n)/n = " << scaled << " at n = " << n;
      throw AssumptionViolationError(msg.str());
    }
  }
}

WishartModel WishartSequenceSpec::model_at(Eigen::Index n) const {
  return WishartModel(p, n, theta, family.spec_for(n));
}

}  // namespace cwish
