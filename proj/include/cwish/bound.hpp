#pragma once

#include "cwish/shape.hpp"
#include "cwish/wishart.hpp"

#include <string>
#include <string_view>

namespace cwish {

/// How κ is formed from the shape matrix: ‖B‖_Frob, or ‖B‖_Frob / ‖B‖.
enum class KappaConvention { FrobeniusNorm, RatioFrobToSpectral };

std::string to_string(KappaConvention c);
/// Accepts "frobenius" and "ratio"; throws InvalidInputError otherwise.
KappaConvention parse_kappa_convention(std::string_view name);

struct BoundInputs {
  Eigen::Index p = 1;
  Eigen::Index n = 1;
  double sigma = 0.0;       // ‖B‖
  double kappa = 0.0;       // per convention
  double theta_norm = 0.0;  // ‖Θ‖
};

struct BoundReport {
  BoundInputs inputs;
  KappaConvention convention = KappaConvention::FrobeniusNorm;
  long log_factor = 1;
  double bound_value = 0.0;

  /// bound_value recomputed from the stored fields.
  double recompute() const;
};

/// ⌈ln 2p⌉².
long log_factor(Eigen::Index p);

/// 24 ⌈ln 2p⌉² √p (4σ + κ√π) / n · ‖Θ‖.
BoundReport evaluate_bound(const BoundInputs& inputs, KappaConvention convention);

/// Throws DivisionByZeroError for B = 0 under the ratio convention.
BoundReport theorem1_bound(const WishartModel& model,
                           KappaConvention convention = KappaConvention::FrobeniusNorm);

/// Uniform constants κ = max ‖B_m‖_Frob, σ = max ‖B_m‖ over the index set,
/// evaluated at n. Requires Tr B_m = m for every m (AssumptionViolationError)
/// and n in the index set (InvalidInputError).
BoundReport corollary2_bound(const WishartSequenceSpec& seq, Eigen::Index n);

inline constexpr Eigen::Index kSampleSizeCap = Eigen::Index{1} << 20;

/// Smallest admissible n of the family whose Frobenius-convention bound is
/// <= tolerance. Exponential search then bisection. Throws
/// NotAchievableError if no n up to kSampleSizeCap qualifies.
Eigen::Index invert_bound_for_n(Eigen::Index p, double theta_norm, double tolerance,
                                const ShapeFamily& family);

}  // namespace cwish
