#include "cwish/verify.hpp"

#include "cwish/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>

namespace cwish {

ExecutionOptions ExecutionOptions::from_environment() {
  unsigned workers = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("WISHART_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && cap > 0) {
      workers = std::min(workers, static_cast<unsigned>(cap));
    }
  }
  return {workers};
}

DeviationStats DeviationStats::from_samples(std::span<const double> samples) {
  if (samples.size() < 2) throw InvalidInputError("statistics need at least two samples");
  DeviationStats s;
  s.trials = static_cast<long>(samples.size());
  double sum = 0.0;
  s.max = samples.front();
  for (double v : samples) {
    sum += v;
    s.max = std::max(s.max, v);
  }
  s.mean = sum / static_cast<double>(s.trials);
  double ss = 0.0;
  for (double v : samples) ss += (v - s.mean) * (v - s.mean);
  const double var = ss / static_cast<double>(s.trials - 1);
  s.std_error = std::sqrt(var / static_cast<double>(s.trials));
  return s;
}

RngSeed trial_seed(RngSeed master, long i) noexcept {
  return derive_seed(master, static_cast<std::uint64_t>(i));
}

namespace {

// Sub-streams of a check's master seed.
constexpr std::uint64_t kDecoupledStream = 0xDEC0;
constexpr std::uint64_t kLipschitzStream = 0x11B5;

void require_trials(long trials) {
  if (trials < 2) throw InvalidInputError("trials must be at least 2");
}

}  // namespace

DeviationStats estimate_mean_deviation(const TrialConfig& cfg, ExecutionOptions exec) {
  require_trials(cfg.trials);
  const DenseMatrix w0 = expected_wishart(cfg.model);
  const auto norms = run_trials(cfg.trials, exec.workers, [&](long i) {
    return spectral_norm(sample_wishart(cfg.model, trial_seed(cfg.master_seed, i)) - w0);
  });
  return DeviationStats::from_samples(norms);
}

ExpectationReport check_expectation(const TrialConfig& cfg, ExecutionOptions exec) {
  require_trials(cfg.trials);
  const auto draws = run_trials(cfg.trials, exec.workers, [&](long i) {
    return sample_wishart(cfg.model, trial_seed(cfg.master_seed, i));
  });
  const Eigen::Index p = cfg.model.p();
  ExpectationReport r;
  r.expected = expected_wishart(cfg.model);
  r.mean = DenseMatrix::Zero(p, p);
  for (const auto& w : draws) r.mean += w;
  r.mean /= static_cast<double>(cfg.trials);
  DenseMatrix ss = DenseMatrix::Zero(p, p);
  for (const auto& w : draws) ss += (w - r.mean).cwiseAbs2();
  r.std_error = (ss / static_cast<double>(cfg.trials - 1) / static_cast<double>(cfg.trials)).cwiseSqrt();

  r.holds = true;
  for (Eigen::Index i = 0; i < p; ++i) {
    for (Eigen::Index j = 0; j < p; ++j) {
      const double diff = std::abs(r.mean(i, j) - r.expected(i, j));
      const double se = r.std_error(i, j);
      if (diff > kEqualityMargin * se) r.holds = false;
      if (se > 0.0) r.max_z = std::max(r.max_z, diff / se);
    }
  }
  return r;
}

DominanceReport check_bound_dominance(const TrialConfig& cfg, KappaConvention convention,
                                      ExecutionOptions exec) {
  DominanceReport r;
  r.empirical = estimate_mean_deviation(cfg, exec);
  r.bound = theorem1_bound(cfg.model, convention);
  r.ratio = r.empirical.mean == 0.0 ? 0.0 : r.empirical.mean / r.bound.bound_value;
  r.holds = r.empirical.mean + kInequalityMargin * r.empirical.std_error <= r.bound.bound_value;
  return r;
}

DecouplingReport check_wishart_decoupling(const TrialConfig& cfg, ExecutionOptions exec) {
  DecouplingReport r;
  r.lhs = estimate_mean_deviation(cfg, exec);
  const RngSeed rhs_master = derive_seed(cfg.master_seed, kDecoupledStream);
  const auto norms = run_trials(cfg.trials, exec.workers, [&](long i) {
    return spectral_norm(sample_decoupled(cfg.model, trial_seed(rhs_master, i)));
  });
  r.rhs = DeviationStats::from_samples(norms);
  r.holds = r.lhs.mean <=
            2.0 * r.rhs.mean + kInequalityMargin * (r.lhs.std_error + 2.0 * r.rhs.std_error);
  return r;
}

ChaosReport check_chaos_decoupling(const std::vector<DenseMatrix>& matrices, const SpdMatrix& theta,
                                   long trials, RngSeed seed, ExecutionOptions exec) {
  require_trials(trials);
  if (matrices.empty() || matrices.size() > kChaosFamilyCap) {
    throw InvalidInputError("chaos check: family must contain 1 to 16 matrices");
  }
  const Eigen::Index p = theta.dim();
  std::vector<double> centers;
  for (const auto& b : matrices) {
    if (b.rows() != p || b.cols() != p) throw DimensionError("chaos check: matrices must be p x p");
    require_finite(b, "chaos check");
    centers.push_back((b * theta.matrix()).trace());
  }
  const DenseMatrix& root = theta.sqrt_matrix();

  const RngSeed lhs_master = derive_seed(seed, 0);
  const RngSeed rhs_master = derive_seed(seed, 1);
  const auto lhs = run_trials(trials, exec.workers, [&](long i) {
    GaussianStream g(trial_seed(lhs_master, i));
    const Vector z = root * g.vector(p);
    double sup = 0.0;
    for (std::size_t k = 0; k < matrices.size(); ++k) {
      sup = std::max(sup, std::abs(z.dot(matrices[k] * z) - centers[k]));
    }
    return sup;
  });
  const auto rhs = run_trials(trials, exec.workers, [&](long i) {
    GaussianStream g(trial_seed(rhs_master, i));
    const Vector z = root * g.vector(p);
    const Vector z_prime = root * g.vector(p);
    double sup = 0.0;
    for (const auto& b : matrices) sup = std::max(sup, std::abs(z_prime.dot(b * z)));
    return sup;
  });

  ChaosReport r;
  r.lhs = DeviationStats::from_samples(lhs);
  r.rhs = DeviationStats::from_samples(rhs);
  r.combined_stderr = r.lhs.std_error + 2.0 * r.rhs.std_error;
  r.holds = r.lhs.mean <= 2.0 * r.rhs.mean + kInequalityMargin * r.combined_stderr;
  return r;
}

LinearFormReport check_linear_form_std(const SpdMatrix& theta, const Vector& a, long trials,
                                       RngSeed seed) {
  require_trials(trials);
  if (a.size() != theta.dim()) throw DimensionError("linear form: a must have length p");
  if (!a.allFinite()) throw InvalidInputError("linear form: a must be finite");
  const DenseMatrix& root = theta.sqrt_matrix();
  // (a, Θ^{1/2} g) = (Θ^{1/2} a, g)
  const Vector weights = root * a;

  GaussianStream g(seed);
  std::vector<double> values(static_cast<std::size_t>(trials));
  for (auto& v : values) v = weights.dot(g.vector(a.size()));

  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(trials);
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);

  LinearFormReport r;
  r.trials = trials;
  r.sample_std = std::sqrt(ss / static_cast<double>(trials - 1));
  r.target = weights.norm();
  r.upper_bound = spectral_norm(root) * a.norm();
  r.tolerance = 5.0 * r.target / std::sqrt(2.0 * static_cast<double>(trials - 1));
  r.norm_inequality_holds = r.target <= r.upper_bound * (1.0 + 1e-12);
  r.holds = std::abs(r.sample_std - r.target) <= r.tolerance && r.norm_inequality_holds;
  return r;
}

double compute_sigma_x(const ShapeMatrix& b, const DenseMatrix& x_mat, const Vector& x) {
  if (x_mat.rows() != x.size() || x_mat.cols() != b.size()) {
    throw DimensionError("sigma_x: X must be p x n with p = len(x), n = size(B)");
  }
  if (std::abs(x.norm() - 1.0) > 1e-9) throw InvalidInputError("sigma_x: x must be a unit vector");
  const double p = static_cast<double>(x_mat.rows());
  const double n = static_cast<double>(x_mat.cols());
  const Vector xt_x = x_mat.transpose() * x;
  return std::sqrt(p) / n * b.apply(xt_x).norm();
}

double compute_sigma_x(const DenseMatrix& b, const DenseMatrix& x_mat, const Vector& x) {
  return compute_sigma_x(ShapeMatrix::dense(b), x_mat, x);
}

double sigma_tail_bound(Eigen::Index p, Eigen::Index n, double b_norm, double t) {
  if (b_norm == 0.0) return t > 0.0 ? 0.0 : 0.5;
  const double nn = static_cast<double>(n);
  return 0.5 * std::exp(-t * t * nn * nn / (2.0 * static_cast<double>(p) * b_norm * b_norm));
}

ConcentrationCheck check_sigma_concentration(const WishartModel& model, const Vector& x,
                                             const std::vector<double>& t_grid, long trials,
                                             RngSeed seed, long lipschitz_pairs,
                                             ExecutionOptions exec) {
  require_trials(trials);
  if (!model.theta().is_identity()) {
    throw InvalidInputError(
        "sigma concentration requires theta = I; whiten first (replace X by Θ^{-1/2} X)");
  }
  if (x.size() != model.p()) throw DimensionError("sigma concentration: x must have length p");
  for (double t : t_grid) {
    if (!(t >= 0.0)) throw InvalidInputError("sigma concentration: t values must be nonnegative");
  }
  const Eigen::Index p = model.p();
  const Eigen::Index n = model.n();
  const double sqrt_p = std::sqrt(static_cast<double>(p));
  const double b_norm = model.shape().spectral_norm();

  ConcentrationCheck c;
  c.x = x;
  c.t_grid = t_grid;
  c.trials = trials;
  c.lipschitz = sqrt_p * b_norm / static_cast<double>(n);
  c.mean_bound = sqrt_p * model.shape().frobenius_norm() / static_cast<double>(n);
  c.u_floor = 3.0 * sqrt_p;

  const auto sigmas = run_trials(trials, exec.workers, [&](long i) {
    const DenseMatrix xm = sample_standard_gaussian_matrix(p, n, trial_seed(seed, i));
    return compute_sigma_x(model.shape(), xm, x);
  });
  c.sigma_stats = DeviationStats::from_samples(sigmas);
  c.mean_holds = c.sigma_stats.mean <= c.mean_bound + kInequalityMargin * c.sigma_stats.std_error;

  c.tails_hold = true;
  const double floor = 10.0 / static_cast<double>(trials);
  for (double t : t_grid) {
    const double threshold = c.mean_bound + t;
    long exceed = 0;
    for (double s : sigmas) exceed += s >= threshold ? 1 : 0;
    const double empirical = static_cast<double>(exceed) / static_cast<double>(trials);
    const double theoretical = sigma_tail_bound(p, n, b_norm, t);
    const bool checked = theoretical >= floor;
    c.empirical_tails.push_back(empirical);
    c.theoretical_tails.push_back(theoretical);
    c.tail_checked.push_back(checked);
    if (checked) {
      const double se = std::sqrt(theoretical * (1.0 - theoretical) / static_cast<double>(trials));
      if (empirical > theoretical + kInequalityMargin * se) c.tails_hold = false;
    }
  }

  c.lipschitz_pairs = lipschitz_pairs;
  const RngSeed lip_master = derive_seed(seed, kLipschitzStream);
  const auto violations = run_trials(lipschitz_pairs, exec.workers, [&](long i) {
    const RngSeed s = trial_seed(lip_master, i);
    const DenseMatrix x1 = sample_standard_gaussian_matrix(p, n, derive_seed(s, 0));
    const DenseMatrix x2 = sample_standard_gaussian_matrix(p, n, derive_seed(s, 1));
    const double lhs = std::abs(compute_sigma_x(model.shape(), x1, x) -
                                compute_sigma_x(model.shape(), x2, x));
    const double rhs = c.lipschitz * (x1 - x2).norm();
    return lhs > rhs * (1.0 + 1e-12) ? 1 : 0;
  });
  for (int v : violations) c.lipschitz_violations += v;

  c.holds = c.tails_hold && c.mean_holds && c.lipschitz_violations == 0;
  return c;
}

double least_squares_slope(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size() || xs.size() < 2) {
    throw InvalidInputError("least_squares_slope: need matching inputs of length >= 2");
  }
  const double m = static_cast<double>(xs.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= m;
  my /= m;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  if (sxx == 0.0) throw InvalidInputError("least_squares_slope: xs are all equal");
  return sxy / sxx;
}

ScalingTable sweep_scaling(Eigen::Index p, const std::vector<Eigen::Index>& n_grid,
                           const ShapeFamily& family, const SpdMatrix& theta, long trials,
                           RngSeed seed, ExecutionOptions exec) {
  if (n_grid.size() < 3) throw InvalidInputError("sweep: n_grid needs at least 3 values");
  for (std::size_t i = 1; i < n_grid.size(); ++i) {
    if (n_grid[i] <= n_grid[i - 1]) throw InvalidInputError("sweep: n_grid must be increasing");
  }
  ScalingTable table;
  table.p = p;
  std::vector<double> log_n;
  std::vector<double> log_mean;
  bool degenerate = false;
  for (Eigen::Index n : n_grid) {
    const WishartModel model(p, n, theta, family.spec_for(n));
    const TrialConfig cfg{model, trials, derive_seed(seed, static_cast<std::uint64_t>(n))};
    ScalingRow row;
    row.n = n;
    row.stats = estimate_mean_deviation(cfg, exec);
    row.bound = theorem1_bound(model, KappaConvention::FrobeniusNorm).bound_value;
    row.ratio = row.stats.mean == 0.0 ? 0.0 : row.stats.mean / row.bound;
    if (row.stats.mean <= 0.0) degenerate = true;
    log_n.push_back(std::log(static_cast<double>(n)));
    log_mean.push_back(row.stats.mean > 0.0 ? std::log(row.stats.mean) : 0.0);
    table.rows.push_back(row);
  }
  if (!degenerate) table.slope = least_squares_slope(log_n, log_mean);
  return table;
}

std::vector<ComplexityRow> empirical_sample_complexity(const std::vector<Eigen::Index>& p_grid,
                                                       double tolerance, const ShapeFamily& family,
                                                       const ThetaRule& theta_rule, long trials,
                                                       RngSeed seed, ExecutionOptions exec) {
  if (!(tolerance > 0.0)) throw InvalidInputError("sample complexity: tolerance must be positive");
  std::vector<ComplexityRow> rows;
  for (Eigen::Index p : p_grid) {
    const SpdMatrix theta = theta_rule(p);
    const RngSeed p_seed = derive_seed(seed, static_cast<std::uint64_t>(p));
    ComplexityRow row;
    row.p = p;
    Eigen::Index n = family.step();
    for (;;) {
      const TrialConfig cfg{WishartModel(p, n, theta, family.spec_for(n)), trials,
                            derive_seed(p_seed, static_cast<std::uint64_t>(n))};
      const DeviationStats stats = estimate_mean_deviation(cfg, exec);
      if (stats.mean + 2.0 * stats.std_error <= tolerance) {
        row.empirical_n = n;
        row.stats_at_n = stats;
        break;
      }
      if (n >= kSampleSizeCap) {
        throw NotAchievableError("sample complexity: empirical search exceeded n = 2^20 at p = " +
                                     std::to_string(p),
                                 stats.mean);
      }
      n *= 2;
    }
    try {
      row.theoretical_n =
          invert_bound_for_n(p, spectral_norm(theta.matrix()), tolerance, family);
    } catch (const NotAchievableError&) {
      row.theoretical_n.reset();
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace cwish
