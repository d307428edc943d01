#include "cwish/errors.hpp"
#include "cwish/verify.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace cwish;

namespace {

constexpr ExecutionOptions kOne{1};

double chi_square_density(double k, double x) {
  return std::exp((k / 2.0 - 1.0) * std::log(x) - x / 2.0 - (k / 2.0) * std::log(2.0) -
                  std::lgamma(k / 2.0));
}

bool same_stats(const DeviationStats& a, const DeviationStats& b) {
  return a.mean == b.mean && a.std_error == b.std_error && a.max == b.max && a.trials == b.trials;
}

WishartModel identity_model(Eigen::Index p, Eigen::Index n) {
  return WishartModel(p, n, SpdMatrix::identity(p), IdentityShape{});
}

}  // namespace

TEST_CASE("deviation stats") {
  const std::vector<double> xs{1.0, 2.0, 3.0, 4.0};
  const auto s = DeviationStats::from_samples(xs);
  CHECK(s.mean == 2.5);
  CHECK(s.max == 4.0);
  CHECK(s.trials == 4);
  CHECK(s.std_error == doctest::Approx(std::sqrt(5.0 / 3.0) / 2.0));
  CHECK_THROWS_AS(DeviationStats::from_samples(std::vector<double>{1.0}), InvalidInputError);
}

TEST_CASE("zero shape gives zero deviation") {
  const WishartModel m(3, 8, SpdMatrix::diagonal(Vector::LinSpaced(3, 1, 3)),
                       DiagonalShape{std::vector<double>(8, 0.0)});
  const auto s = estimate_mean_deviation({m, 50, RngSeed{1}}, kOne);
  CHECK(s.mean == 0.0);
  CHECK(s.std_error == 0.0);
  CHECK(s.max == 0.0);
  const auto d = check_bound_dominance({m, 50, RngSeed{1}}, KappaConvention::FrobeniusNorm, kOne);
  CHECK(d.ratio == 0.0);
  CHECK(d.holds);
}

TEST_CASE("scalar case matches the chi-square mean absolute deviation") {
  const int n = 64;
  const long trials = 100000;
  const auto s = estimate_mean_deviation({identity_model(1, n), trials, RngSeed{2024}}, kOne);

  // E|X - k| = 4 k f_k(k) for X ~ chi-square(k).
  const double analytic = 4.0 * chi_square_density(n, n);
  CHECK(std::abs(s.mean - analytic) <= 4.0 * s.std_error);

  std::mt19937_64 gen(77);
  std::chi_squared_distribution<double> chi(n);
  std::vector<double> direct(trials);
  for (auto& d : direct) d = std::abs(chi(gen) / n - 1.0);
  const auto ds = DeviationStats::from_samples(direct);
  CHECK(std::abs(s.mean - ds.mean) <= 4.0 * std::hypot(s.std_error, ds.std_error));
}

TEST_CASE("scaling theta scales the deviation exactly") {
  const WishartModel m(3, 10, SpdMatrix::diagonal(Vector::LinSpaced(3, 1, 3)), SkewBlockShape{});
  const auto base = estimate_mean_deviation({m, 200, RngSeed{5}}, kOne);
  const auto scaled =
      estimate_mean_deviation({m.with_theta(SpdMatrix(4.0 * m.theta().matrix())), 200, RngSeed{5}}, kOne);
  CHECK(scaled.mean == doctest::Approx(4.0 * base.mean).epsilon(1e-12));
  CHECK(scaled.std_error == doctest::Approx(4.0 * base.std_error).epsilon(1e-10));
}

TEST_CASE("expectation check") {
  const WishartModel m(2, 6, SpdMatrix::diagonal(Vector::LinSpaced(2, 1, 2)),
                       DiagonalShape{{3.0, 1.0, 0.0, 0.0, 2.0, 0.0}});
  const auto r = check_expectation({m, 20000, RngSeed{8}}, kOne);
  CHECK(r.holds);
  CHECK(r.expected(0, 0) == doctest::Approx(1.0));
  CHECK(r.expected(1, 1) == doctest::Approx(2.0));
  CHECK(r.expected(0, 1) == 0.0);
  CHECK(r.max_z <= 4.0);
}

TEST_CASE("bound dominance") {
  auto r = check_bound_dominance({identity_model(4, 32), 2000, RngSeed{3}}, KappaConvention::FrobeniusNorm,
                                 kOne);
  CHECK(r.holds);
  CHECK(r.ratio > 0.0);
  CHECK(r.ratio < 1.0);

  const WishartModel skew(2, 8, SpdMatrix::diagonal(Vector::LinSpaced(2, 1, 3)), SkewBlockShape{});
  r = check_bound_dominance({skew, 2000, RngSeed{4}}, KappaConvention::FrobeniusNorm, kOne);
  CHECK(r.holds);
  CHECK(r.bound.inputs.theta_norm == doctest::Approx(3.0));
}

TEST_CASE("wishart decoupling") {
  CHECK(check_wishart_decoupling({identity_model(3, 16), 5000, RngSeed{10}}, kOne).holds);
  const WishartModel skew(3, 16, SpdMatrix::identity(3), SkewBlockShape{});
  const auto r = check_wishart_decoupling({skew, 5000, RngSeed{11}}, kOne);
  CHECK(r.holds);
  CHECK(r.rhs.mean > 0.0);
}

TEST_CASE("chaos decoupling") {
  const SpdMatrix id = SpdMatrix::identity(3);
  auto r = check_chaos_decoupling({DenseMatrix::Zero(3, 3)}, id, 1000, RngSeed{1}, kOne);
  CHECK(r.holds);
  CHECK(r.lhs.mean == 0.0);
  CHECK(r.rhs.mean == 0.0);

  r = check_chaos_decoupling({DenseMatrix::Identity(3, 3)}, id, 100000, RngSeed{2}, kOne);
  CHECK(r.holds);
  CHECK(std::abs(r.lhs.mean - 12.0 * chi_square_density(3, 3)) <= 4.0 * r.lhs.std_error);

  std::vector<DenseMatrix> family;
  for (std::uint64_t k = 0; k < 4; ++k) family.push_back(sample_standard_gaussian_matrix(3, 3, RngSeed{k}));
  r = check_chaos_decoupling(family, SpdMatrix::diagonal(Vector::LinSpaced(3, 1, 3)), 20000, RngSeed{3},
                             kOne);
  CHECK(r.holds);
  CHECK(r.combined_stderr == doctest::Approx(r.lhs.std_error + 2.0 * r.rhs.std_error));

  CHECK_THROWS_AS(check_chaos_decoupling({}, id, 10, RngSeed{1}), InvalidInputError);
  CHECK_THROWS_AS(check_chaos_decoupling(std::vector<DenseMatrix>(17, DenseMatrix::Zero(3, 3)), id, 10,
                                         RngSeed{1}),
                  InvalidInputError);
  CHECK_THROWS_AS(check_chaos_decoupling({DenseMatrix::Zero(2, 2)}, id, 10, RngSeed{1}), DimensionError);
}

TEST_CASE("linear form standard deviation") {
  auto r = check_linear_form_std(SpdMatrix::identity(2), Vector::Zero(2), 1000, RngSeed{1});
  CHECK(r.sample_std == 0.0);
  CHECK(r.target == 0.0);
  CHECK(r.holds);

  r = check_linear_form_std(SpdMatrix::identity(3), Vector::Unit(3, 0), 100000, RngSeed{2});
  CHECK(r.target == 1.0);
  CHECK(r.holds);

  r = check_linear_form_std(SpdMatrix::diagonal(Vector::LinSpaced(2, 4, 1)), Vector::Ones(2), 100000,
                            RngSeed{3});
  CHECK(r.target == doctest::Approx(std::sqrt(5.0)));
  CHECK(r.upper_bound == doctest::Approx(2.0 * std::sqrt(2.0)));
  CHECK(r.norm_inequality_holds);
  CHECK(r.holds);
  CHECK(r.tolerance == doctest::Approx(5.0 * std::sqrt(5.0) / std::sqrt(2.0 * 99999.0)));

  CHECK_THROWS_AS(check_linear_form_std(SpdMatrix::identity(2), Vector::Ones(3), 10, RngSeed{1}),
                  DimensionError);
}

TEST_CASE("sigma_x against a double sum") {
  GaussianStream g(RngSeed{44});
  for (int trial = 0; trial < 20; ++trial) {
    const int p = 2 + trial % 3;
    const int n = 4 + 2 * (trial % 4);
    const DenseMatrix b = sample_standard_gaussian_matrix(n, n, RngSeed{100u + trial});
    const DenseMatrix x = sample_standard_gaussian_matrix(p, n, RngSeed{200u + trial});
    Vector u = g.vector(p);
    u /= u.norm();
    double sq = 0.0;
    for (int i = 0; i < n; ++i) {
      double acc = 0.0;
      for (int j = 0; j < n; ++j) {
        double xj = 0.0;
        for (int k = 0; k < p; ++k) xj += x(k, j) * u(k);
        acc += b(i, j) * xj;
      }
      sq += acc * acc;
    }
    const double oracle = std::sqrt(static_cast<double>(p)) / n * std::sqrt(sq);
    CHECK(compute_sigma_x(b, x, u) == doctest::Approx(oracle).epsilon(1e-12));
  }

  const DenseMatrix x = sample_standard_gaussian_matrix(3, 5, RngSeed{9});
  const ShapeMatrix ident = realize_shape(IdentityShape{}, 5);
  CHECK(compute_sigma_x(ident, x, Vector::Unit(3, 0)) ==
        doctest::Approx(std::sqrt(3.0) / 5.0 * x.row(0).norm()).epsilon(1e-14));
  CHECK_THROWS_AS(compute_sigma_x(ident, x, Vector::Ones(3)), InvalidInputError);
  CHECK_THROWS_AS(compute_sigma_x(ident, x, Vector::Unit(4, 0)), DimensionError);
}

TEST_CASE("sigma concentration") {
  CHECK(sigma_tail_bound(3, 16, 1.0, 0.0) == 0.5);
  CHECK(sigma_tail_bound(3, 16, 1.0, 0.2) == doctest::Approx(0.5 * std::exp(-0.04 * 256 / 6.0)));
  CHECK(sigma_tail_bound(3, 16, 0.0, 0.0) == 0.5);
  CHECK(sigma_tail_bound(3, 16, 0.0, 0.1) == 0.0);

  const auto c = check_sigma_concentration(identity_model(3, 16), Vector::Unit(3, 0),
                                           {0.0, 0.1, 0.2, 0.3, 0.4}, 20000, RngSeed{6}, 500, kOne);
  CHECK(c.tails_hold);
  CHECK(c.mean_holds);
  CHECK(c.lipschitz_violations == 0);
  CHECK(c.holds);
  CHECK(c.lipschitz == doctest::Approx(std::sqrt(3.0) / 16.0));
  CHECK(c.mean_bound == doctest::Approx(std::sqrt(3.0) / 4.0));
  for (std::size_t i = 1; i < c.empirical_tails.size(); ++i) {
    CHECK(c.empirical_tails[i] <= c.empirical_tails[i - 1]);
  }

  const WishartModel other(2, 4, SpdMatrix::diagonal(Vector::LinSpaced(2, 1, 2)), IdentityShape{});
  CHECK_THROWS_AS(check_sigma_concentration(other, Vector::Unit(2, 0), {0.0}, 100, RngSeed{1}),
                  InvalidInputError);
}

TEST_CASE("standard error shrinks like one over root N") {
  const WishartModel m = identity_model(3, 12);
  const auto small = estimate_mean_deviation({m, 2000, RngSeed{21}}, kOne);
  const auto large = estimate_mean_deviation({m, 8000, RngSeed{21}}, kOne);
  CHECK(large.std_error / small.std_error == doctest::Approx(0.5).epsilon(0.3));
}

TEST_CASE("results do not depend on the worker count") {
  const WishartModel m(4, 20, SpdMatrix::diagonal(Vector::LinSpaced(4, 1, 4)), SkewBlockShape{});
  const TrialConfig cfg{m, 700, RngSeed{12}};
  CHECK(same_stats(estimate_mean_deviation(cfg, ExecutionOptions{1}),
                   estimate_mean_deviation(cfg, ExecutionOptions{4})));
  const auto d1 = check_wishart_decoupling(cfg, ExecutionOptions{1});
  const auto d4 = check_wishart_decoupling(cfg, ExecutionOptions{3});
  CHECK(same_stats(d1.rhs, d4.rhs));
  const auto e1 = check_expectation(cfg, ExecutionOptions{1});
  const auto e4 = check_expectation(cfg, ExecutionOptions{4});
  CHECK(e1.mean == e4.mean);
  CHECK(e1.std_error == e4.std_error);
}

TEST_CASE("trial seeds") {
  CHECK(trial_seed(RngSeed{1}, 0) == derive_seed(RngSeed{1}, 0));
  CHECK_FALSE(trial_seed(RngSeed{1}, 0) == trial_seed(RngSeed{1}, 1));
  CHECK_FALSE(trial_seed(RngSeed{1}, 0) == trial_seed(RngSeed{2}, 0));
}

TEST_CASE("least squares slope") {
  const std::vector<double> xs{0, 1, 2, 3};
  const std::vector<double> ys{1, 3, 5, 7};
  CHECK(least_squares_slope(xs, ys) == doctest::Approx(2.0));
  const std::vector<double> noisy{0.1, -0.1, 0.1, -0.1};
  CHECK(least_squares_slope(xs, noisy) == doctest::Approx(-0.04));
  CHECK_THROWS_AS(least_squares_slope(std::vector<double>{1, 1}, std::vector<double>{1, 2}),
                  InvalidInputError);
  CHECK_THROWS_AS(least_squares_slope(xs, std::vector<double>{1}), InvalidInputError);
}

TEST_CASE("scaling sweep") {
  const auto t = sweep_scaling(2, {8, 32, 128}, ShapeFamily::identity(), SpdMatrix::identity(2), 1000,
                               RngSeed{7}, kOne);
  REQUIRE(t.rows.size() == 3);
  REQUIRE(t.slope.has_value());
  CHECK(*t.slope > -0.6);
  CHECK(*t.slope < -0.4);
  for (const auto& row : t.rows) CHECK(row.ratio < 1.0);

  const auto z = sweep_scaling(2, {2, 4, 8}, ShapeFamily::zero(), SpdMatrix::identity(2), 10, RngSeed{7},
                               kOne);
  CHECK_FALSE(z.slope.has_value());
  CHECK(z.rows[0].stats.mean == 0.0);

  CHECK_THROWS_AS(sweep_scaling(2, {8, 16}, ShapeFamily::identity(), SpdMatrix::identity(2), 10,
                                RngSeed{1}),
                  InvalidInputError);
  CHECK_THROWS_AS(sweep_scaling(2, {8, 16, 16}, ShapeFamily::identity(), SpdMatrix::identity(2), 10,
                                RngSeed{1}),
                  InvalidInputError);
}

TEST_CASE("empirical sample complexity") {
  const ThetaRule ident = [](Eigen::Index p) { return SpdMatrix::identity(p); };
  auto rows = empirical_sample_complexity({2}, 1e6, ShapeFamily::identity(), ident, 50, RngSeed{1}, kOne);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].empirical_n == 1);

  rows = empirical_sample_complexity({2, 4, 8}, 2.0, ShapeFamily::identity(), ident, 200, RngSeed{2}, kOne);
  for (const auto& r : rows) {
    REQUIRE(r.theoretical_n.has_value());
    CHECK(*r.theoretical_n >= r.empirical_n);
    CHECK(r.stats_at_n.mean + 2.0 * r.stats_at_n.std_error <= 2.0);
  }

  rows = empirical_sample_complexity({1, 4, 16}, 0.5, ShapeFamily::identity(), ident, 400, RngSeed{3},
                                     kOne);
  CHECK(rows[0].empirical_n <= rows[1].empirical_n);
  CHECK(rows[1].empirical_n <= rows[2].empirical_n);

  CHECK_THROWS_AS(empirical_sample_complexity({2}, 0.0, ShapeFamily::identity(), ident, 10, RngSeed{1}),
                  InvalidInputError);
}
