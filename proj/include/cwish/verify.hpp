#pragma once

#include "cwish/bound.hpp"
#include "cwish/parallel.hpp"
#include "cwish/regular.hpp"
#include "cwish/wishart.hpp"

#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace cwish {

struct TrialConfig {
  WishartModel model;
  long trials = 2000;
  RngSeed master_seed;
};

inline constexpr long kDefaultNormTrials = 2000;
inline constexpr long kDefaultScalarTrials = 100000;

/// Margins: inequality checks allow 3 standard errors, equality-of-means
/// checks 4.
inline constexpr double kInequalityMargin = 3.0;
inline constexpr double kEqualityMargin = 4.0;

struct DeviationStats {
  double mean = 0.0;
  double std_error = 0.0;  // sample std / √N
  double max = 0.0;
  long trials = 0;

  /// Two-pass summary in index order. Requires at least two samples.
  static DeviationStats from_samples(std::span<const double> samples);
};

/// Seed of trial i under a master seed.
RngSeed trial_seed(RngSeed master, long i) noexcept;

/// ‖W_i - W⁰‖ over cfg.trials draws.
DeviationStats estimate_mean_deviation(const TrialConfig& cfg,
                                       ExecutionOptions exec = ExecutionOptions::from_environment());

/// Entrywise Monte Carlo mean of W against (Tr B / n) Θ.
struct ExpectationReport {
  DenseMatrix mean;
  DenseMatrix std_error;
  DenseMatrix expected;
  double max_z = 0.0;  // max |mean - expected| / stderr over entries with stderr > 0
  bool holds = false;
};
ExpectationReport check_expectation(const TrialConfig& cfg,
                                    ExecutionOptions exec = ExecutionOptions::from_environment());

struct DominanceReport {
  DeviationStats empirical;
  BoundReport bound;
  double ratio = 0.0;  // empirical mean / bound, 0 when the mean is 0
  bool holds = false;
};
DominanceReport check_bound_dominance(const TrialConfig& cfg,
                                      KappaConvention convention = KappaConvention::FrobeniusNorm,
                                      ExecutionOptions exec = ExecutionOptions::from_environment());

struct DecouplingReport {
  DeviationStats lhs;  // ‖W - W⁰‖
  DeviationStats rhs;  // ‖W'‖
  bool holds = false;
};
DecouplingReport check_wishart_decoupling(const TrialConfig& cfg,
                                          ExecutionOptions exec = ExecutionOptions::from_environment());

struct ChaosReport {
  DeviationStats lhs;  // sup_B |(BZ, Z) - Tr(BΘ)|
  DeviationStats rhs;  // sup_B |(BZ, Z')|
  double combined_stderr = 0.0;
  bool holds = false;
};
inline constexpr std::size_t kChaosFamilyCap = 16;
/// Decoupling of a finite family of chaoses, factor-2 form.
ChaosReport check_chaos_decoupling(const std::vector<DenseMatrix>& matrices,
                                   const SpdMatrix& theta, long trials, RngSeed seed,
                                   ExecutionOptions exec = ExecutionOptions::from_environment());

struct LinearFormReport {
  double sample_std = 0.0;
  double target = 0.0;       // ‖Θ^{1/2} a‖₂
  double upper_bound = 0.0;  // ‖Θ^{1/2}‖ ‖a‖₂
  double tolerance = 0.0;    // 5 · target / sqrt(2(N-1))
  long trials = 0;
  bool norm_inequality_holds = false;
  bool holds = false;
};
LinearFormReport check_linear_form_std(const SpdMatrix& theta, const Vector& a, long trials,
                                       RngSeed seed);

/// (√p / n) ‖B X^T x‖₂ for X of size p x n and unit x.
double compute_sigma_x(const ShapeMatrix& b, const DenseMatrix& x_mat, const Vector& x);
double compute_sigma_x(const DenseMatrix& b, const DenseMatrix& x_mat, const Vector& x);

struct ConcentrationCheck {
  Vector x;
  std::vector<double> t_grid;
  double lipschitz = 0.0;   // √p ‖B‖ / n
  double mean_bound = 0.0;  // √p ‖B‖_Frob / n
  double u_floor = 0.0;     // 3√p
  std::vector<double> empirical_tails;
  std::vector<double> theoretical_tails;
  std::vector<bool> tail_checked;  // theoretical >= 10 / N
  long trials = 0;
  DeviationStats sigma_stats;
  long lipschitz_pairs = 0;
  long lipschitz_violations = 0;
  bool tails_hold = false;
  bool mean_holds = false;
  bool holds = false;
};

/// (1/2) exp(-t² n² / (2 p ‖B‖²)); 1/2 when ‖B‖ = 0 and t = 0, else 0.
double sigma_tail_bound(Eigen::Index p, Eigen::Index n, double b_norm, double t);

/// Requires Θ = I (InvalidInputError otherwise).
ConcentrationCheck check_sigma_concentration(const WishartModel& model, const Vector& x,
                                             const std::vector<double>& t_grid, long trials,
                                             RngSeed seed, long lipschitz_pairs = 1000,
                                             ExecutionOptions exec = ExecutionOptions::from_environment());

struct ScalingRow {
  Eigen::Index n = 0;
  DeviationStats stats;
  double bound = 0.0;
  double ratio = 0.0;
};
struct ScalingTable {
  Eigen::Index p = 0;
  std::vector<ScalingRow> rows;
  /// Least-squares slope of log mean vs log n; empty when any mean is 0.
  std::optional<double> slope;
};

/// Requires an increasing n_grid of length >= 3.
ScalingTable sweep_scaling(Eigen::Index p, const std::vector<Eigen::Index>& n_grid,
                           const ShapeFamily& family, const SpdMatrix& theta, long trials,
                           RngSeed seed,
                           ExecutionOptions exec = ExecutionOptions::from_environment());

struct ComplexityRow {
  Eigen::Index p = 0;
  Eigen::Index empirical_n = 0;
  DeviationStats stats_at_n;
  std::optional<Eigen::Index> theoretical_n;  // empty when beyond the cap
};

using ThetaRule = std::function<SpdMatrix(Eigen::Index)>;

/// Doubling search per p for the first n with mean + 2·stderr <= tolerance.
std::vector<ComplexityRow> empirical_sample_complexity(
    const std::vector<Eigen::Index>& p_grid, double tolerance, const ShapeFamily& family,
    const ThetaRule& theta_rule, long trials, RngSeed seed,
    ExecutionOptions exec = ExecutionOptions::from_environment());

/// Least-squares slope of ys on xs.
double least_squares_slope(std::span<const double> xs, std::span<const double> ys);

}  // namespace cwish
