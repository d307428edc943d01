#include "cwish/errors.hpp"
#include "cwish/linalg.hpp"
#include "cwish/rng.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>

using namespace cwish;

namespace {

DenseMatrix seeded_matrix(Eigen::Index r, Eigen::Index c, std::uint64_t seed) {
  return sample_standard_gaussian_matrix(r, c, RngSeed{seed});
}

Vector random_unit(GaussianStream& g, Eigen::Index p) {
  Vector v = g.vector(p);
  return v / v.norm();
}

}  // namespace

TEST_CASE("spectral norm of simple matrices") {
  CHECK(spectral_norm(DenseMatrix::Identity(3, 3)) == doctest::Approx(1.0).epsilon(1e-12));
  DenseMatrix a(2, 2);
  a << 0, 2, 0, 0;
  CHECK(spectral_norm(a) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(spectral_norm(DenseMatrix::Zero(3, 4)) == 0.0);
}

TEST_CASE("spectral norm against a random unit-pair oracle") {
  const DenseMatrix a = seeded_matrix(5, 5, 2024);
  // For each random x the best y is Ax/|Ax| (Cauchy-Schwarz), so every pair
  // evaluated is a valid lower bound on sup (Ax, y).
  GaussianStream g(RngSeed{77});
  double oracle = 0.0;
  for (int k = 0; k < 1'000'000; ++k) {
    const Vector x = random_unit(g, 5);
    const Vector ax = a * x;
    const Vector y = ax / ax.norm();
    oracle = std::max(oracle, ax.dot(y));
  }
  const double exact = spectral_norm(a);
  CHECK(oracle <= exact);
  CHECK(exact <= oracle * (1.0 + 1e-3));
}

TEST_CASE("spectral norm rejects non-finite input") {
  DenseMatrix a = DenseMatrix::Identity(2, 2);
  a(0, 1) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(spectral_norm(a), InvalidInputError);
  a(0, 1) = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(frobenius_norm(a), InvalidInputError);
}

TEST_CASE("power iteration path agrees with an SVD") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const DenseMatrix a = seeded_matrix(100, 80, seed);
    const double svd = Eigen::BDCSVD<DenseMatrix>(a).singularValues()(0);
    CHECK(spectral_norm(a) == doctest::Approx(svd).epsilon(1e-9));
  }
  const DenseMatrix small = seeded_matrix(6, 9, 5);
  CHECK(spectral_norm_power(small) == doctest::Approx(spectral_norm(small)).epsilon(1e-9));
}

TEST_CASE("spectral norm properties on seeded matrices") {
  GaussianStream g(RngSeed{11});
  for (int k = 0; k < 1000; ++k) {
    const auto rows = 1 + static_cast<Eigen::Index>(g.uniform() * 8);
    const auto cols = 1 + static_cast<Eigen::Index>(g.uniform() * 8);
    const DenseMatrix a = seeded_matrix(rows, cols, 1000 + k);
    const double s = spectral_norm(a);
    REQUIRE(s <= frobenius_norm(a) * (1.0 + 1e-12));
    const double c = g.next() * 3.0;
    REQUIRE(spectral_norm(c * a) == doctest::Approx(std::abs(c) * s).epsilon(1e-9));
  }
}

TEST_CASE("frobenius norm") {
  CHECK(frobenius_norm(DenseMatrix::Identity(7, 7)) == doctest::Approx(std::sqrt(7.0)));
  CHECK(frobenius_norm(DenseMatrix::Zero(3, 2)) == 0.0);
  DenseMatrix a(2, 2);
  a << 1, 2, 3, 4;
  CHECK(frobenius_norm(a) == doctest::Approx(std::sqrt(30.0)).epsilon(1e-15));
  CHECK(frobenius_norm(a) == doctest::Approx(std::sqrt((a * a.transpose()).trace())));
}

TEST_CASE("spd square root") {
  const SpdMatrix id = SpdMatrix::identity(3);
  CHECK(spd_sqrt(id).matrix().isIdentity(0.0));

  Vector d(2);
  d << 4, 9;
  const SpdMatrix r = spd_sqrt(SpdMatrix::diagonal(d));
  CHECK(r.matrix()(0, 0) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(r.matrix()(1, 1) == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(std::abs(r.matrix()(0, 1)) < 1e-14);

  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const DenseMatrix gm = seeded_matrix(5, 5, 500 + seed);
    const SpdMatrix s(gm * gm.transpose() + DenseMatrix::Identity(5, 5));
    const SpdMatrix root = spd_sqrt(s);
    const DenseMatrix sq = root.matrix() * root.matrix();
    CHECK((sq - s.matrix()).norm() <= 1e-10 * s.matrix().norm());
    CHECK(root.min_eigenvalue() > 0.0);
    CHECK((root.matrix() - root.matrix().transpose()).norm() == 0.0);
  }
}

TEST_CASE("spd construction errors") {
  DenseMatrix indefinite(2, 2);
  indefinite << 1, 2, 2, 1;  // eigenvalues 3, -1
  try {
    SpdMatrix s(indefinite);
    FAIL("expected NotPositiveDefiniteError");
  } catch (const NotPositiveDefiniteError& e) {
    CHECK(e.eigenvalue() == doctest::Approx(-1.0));
    CHECK(std::string(e.what()).find("-1") != std::string::npos);
  }
  DenseMatrix asym(2, 2);
  asym << 2, 1, 0, 2;
  CHECK_THROWS_AS(SpdMatrix{asym}, InvalidInputError);
  CHECK_THROWS_AS(SpdMatrix{DenseMatrix::Identity(2, 3)}, DimensionError);
  DenseMatrix tiny = DenseMatrix::Identity(2, 2) * 1e-11;
  CHECK_THROWS_AS(SpdMatrix{tiny}, NotPositiveDefiniteError);
}

TEST_CASE("gaussian sampler determinism") {
  const DenseMatrix a = sample_standard_gaussian_matrix(3, 4, RngSeed{9});
  const DenseMatrix b = sample_standard_gaussian_matrix(3, 4, RngSeed{9});
  CHECK((a.array() == b.array()).all());
  const DenseMatrix c = sample_standard_gaussian_matrix(3, 4, RngSeed{10});
  CHECK((a.array() != c.array()).any());
  CHECK(derive_seed(RngSeed{9}, 0) != derive_seed(RngSeed{9}, 1));
}

TEST_CASE("gaussian sampler moments") {
  const DenseMatrix x = sample_standard_gaussian_matrix(1, 1'000'000, RngSeed{123});
  const double mean = x.mean();
  const double var = (x.array() - mean).square().sum() / (x.size() - 1);
  const double m4 = x.array().pow(4).mean();
  CHECK(std::abs(mean) < 4e-3);
  CHECK(std::abs(var - 1.0) < 0.01);
  CHECK(std::abs(m4 - 3.0) < 0.03 * 3.0);
}
