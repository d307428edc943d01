#include "cwish/bound.hpp"

#include "cwish/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace cwish {

std::string to_string(KappaConvention c) {
  return c == KappaConvention::FrobeniusNorm ? "frobenius" : "ratio";
}

KappaConvention parse_kappa_convention(std::string_view name) {
  if (name == "frobenius") return KappaConvention::FrobeniusNorm;
  if (name == "ratio") return KappaConvention::RatioFrobToSpectral;
  throw InvalidInputError("unknown kappa convention '" + std::string(name) +
                          "' (expected frobenius or ratio)");
}

long log_factor(Eigen::Index p) {
  if (p < 1) throw InvalidInputError("log_factor: p must be positive");
  const auto c = static_cast<long>(std::ceil(std::log(2.0 * static_cast<double>(p))));
  return c * c;
}

namespace {

double bound_formula(long factor, const BoundInputs& in) {
  const double sqrt_p = std::sqrt(static_cast<double>(in.p));
  return 24.0 * static_cast<double>(factor) * sqrt_p *
         (4.0 * in.sigma + in.kappa * std::sqrt(std::numbers::pi)) / static_cast<double>(in.n) *
         in.theta_norm;
}

}  // namespace

double BoundReport::recompute() const { return bound_formula(log_factor, inputs); }

BoundReport evaluate_bound(const BoundInputs& inputs, KappaConvention convention) {
  if (inputs.p < 1 || inputs.n < 1) throw InvalidInputError("bound: p and n must be positive");
  for (double v : {inputs.sigma, inputs.kappa, inputs.theta_norm}) {
    if (!std::isfinite(v) || v < 0.0) {
      throw InvalidInputError("bound: sigma, kappa and theta_norm must be finite and nonnegative");
    }
  }
  BoundReport report;
  report.inputs = inputs;
  report.convention = convention;
  report.log_factor = log_factor(inputs.p);
  report.bound_value = bound_formula(report.log_factor, inputs);
  return report;
}

namespace {

double kappa_for(const ShapeMatrix& b, KappaConvention convention, double sigma) {
  const double frob = b.frobenius_norm();
  if (convention == KappaConvention::FrobeniusNorm) return frob;
  if (sigma == 0.0) {
    throw DivisionByZeroError("ratio kappa convention is undefined for B = 0 (‖B‖ = 0)");
  }
  return frob / sigma;
}

}  // namespace

BoundReport theorem1_bound(const WishartModel& model, KappaConvention convention) {
  BoundInputs in;
  in.p = model.p();
  in.n = model.n();
  in.sigma = model.shape().spectral_norm();
  in.kappa = kappa_for(model.shape(), convention, in.sigma);
  in.theta_norm = spectral_norm(model.theta().matrix());
  return evaluate_bound(in, convention);
}

BoundReport corollary2_bound(const WishartSequenceSpec& seq, Eigen::Index n) {
  if (std::find(seq.index_set.begin(), seq.index_set.end(), n) == seq.index_set.end()) {
    std::ostringstream msg;
    msg << "sequence bound: n = " << n << " is not in the index set";
    throw InvalidInputError(msg.str());
  }
  if (seq.theta.dim() != seq.p) throw DimensionError("sequence: theta dimension must equal p");
  BoundInputs in;
  in.p = seq.p;
  in.n = n;
  for (Eigen::Index m : seq.index_set) {
    const ShapeMatrix b = realize_shape(seq.family.spec_for(m), m);
    const TraceCheck tc = check_trace_normalization(b);
    if (!tc.normalized) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "assumption violated: trace normalization requires Tr(B_m) = m for every m in the "
             "index set, but Tr(B_m)/m = "
          << tc.scaled_trace << " at m = " << m;
      throw AssumptionViolationError(msg.str());
    }
    in.kappa = std::max(in.kappa, b.frobenius_norm());
    in.sigma = std::max(in.sigma, b.spectral_norm());
  }
  in.theta_norm = spectral_norm(seq.theta.matrix());
  return evaluate_bound(in, KappaConvention::FrobeniusNorm);
}

Eigen::Index invert_bound_for_n(Eigen::Index p, double theta_norm, double tolerance,
                                const ShapeFamily& family) {
  if (!(tolerance > 0.0) || !std::isfinite(tolerance)) {
    throw InvalidInputError("invert_bound_for_n: tolerance must be positive");
  }
  const Eigen::Index step = family.step();
  auto bound_at = [&](Eigen::Index n) {
    BoundInputs in;
    in.p = p;
    in.n = n;
    const ShapeMatrix b = realize_shape(family.spec_for(n), n);
    in.sigma = b.spectral_norm();
    in.kappa = b.frobenius_norm();
    in.theta_norm = theta_norm;
    return evaluate_bound(in, KappaConvention::FrobeniusNorm).bound_value;
  };

  // Search over k with n = k * step.
  const Eigen::Index k_cap = kSampleSizeCap / step;
  Eigen::Index hi = 1;
  while (bound_at(hi * step) > tolerance) {
    if (hi == k_cap) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "tolerance " << tolerance << " not achievable for n <= " << kSampleSizeCap
          << "; bound at cap is " << bound_at(k_cap * step);
      throw NotAchievableError(msg.str(), bound_at(k_cap * step));
    }
    hi = std::min(hi * 2, k_cap);
  }
  Eigen::Index lo = hi / 2;  // bound(lo) > tolerance, or lo == 0
  while (hi - lo > 1) {
    const Eigen::Index mid = lo + (hi - lo) / 2;
    if (bound_at(mid * step) <= tolerance) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi * step;
}

}  // namespace cwish
