#include <doctest.h>

#include <cmath>

#include "gstep/linalg.hpp"
#include "gstep/random.hpp"

using namespace gstep;

namespace {

Matrix random_pd(Index p, Rng& rng, double ridge = 0.5) {
  Matrix a(p, p);
  for (Index i = 0; i < p; ++i)
    for (Index j = 0; j < p; ++j) a(i, j) = rng.normal();
  return a * a.transpose() + ridge * Matrix::Identity(p, p);
}

double rel_frob(const Matrix& a, const Matrix& b) { return (a - b).norm() / b.norm(); }

}  // namespace

TEST_CASE("cholesky of small matrices") {
  SUBCASE("identity") {
    CHECK(cholesky(Matrix::Identity(3, 3)).lower().isApprox(Matrix::Identity(3, 3)));
  }
  SUBCASE("hand factor of [[4,2],[2,3]]") {
    Matrix a{{4, 2}, {2, 3}};
    const auto l = cholesky(a).lower();
    CHECK(l(0, 0) == doctest::Approx(2.0));
    CHECK(l(0, 1) == 0.0);
    CHECK(l(1, 0) == doctest::Approx(1.0));
    CHECK(l(1, 1) == doctest::Approx(std::sqrt(2.0)));
  }
  SUBCASE("indefinite matrix reports its pivot") {
    Matrix a{{1, 2}, {2, 1}};
    try {
      cholesky(a);
      FAIL("expected NotPositiveDefinite");
    } catch (const NotPositiveDefinite& e) {
      CHECK(e.pivot() == 1);
    }
  }
  SUBCASE("asymmetric input is a contract violation") {
    Matrix a{{1, 0.2}, {0.3, 1}};
    CHECK_THROWS_AS(cholesky(a), ContractViolation);
  }
}

TEST_CASE("cholesky reassembles random PD matrices") {
  Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const Matrix a = random_pd(1 + trial % 8, rng);
    const auto f = cholesky(a);
    const Matrix& l = f.lower();
    CHECK(l.isLowerTriangular());
    CHECK((l.diagonal().array() > 0).all());
    CHECK(rel_frob(f.reconstruct(), a) <= 1e-8);
  }
}

TEST_CASE("invert_pd") {
  CHECK(invert_pd(Matrix::Identity(4, 4)).isApprox(Matrix::Identity(4, 4)));

  Matrix d = Vector{{2.0, 4.0}}.asDiagonal();
  Matrix expected = Vector{{0.5, 0.25}}.asDiagonal();
  CHECK(invert_pd(d).isApprox(expected));

  Matrix block{{1, 0.5}, {0.5, 1}};
  Matrix closed = (1.0 / 0.75) * Matrix{{1, -0.5}, {-0.5, 1}};
  CHECK((invert_pd(block) - closed).cwiseAbs().maxCoeff() < 1e-12);

  Rng rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    const Matrix a = random_pd(2 + trial % 6, rng, 1e-3);
    const Matrix inv = invert_pd(a);
    CHECK(inv.isApprox(inv.transpose(), 0.0));
    CHECK(rel_frob(invert_pd(inv), a) <= 1e-6);
  }
}

TEST_CASE("log_det_pd") {
  CHECK(log_det_pd(Matrix::Identity(3, 3)) == doctest::Approx(0.0));
  Matrix e = std::exp(1.0) * Matrix::Identity(2, 2);
  CHECK(log_det_pd(e) == doctest::Approx(2.0));
  Matrix a{{4, 2}, {2, 3}};
  CHECK(log_det_pd(a) == doctest::Approx(std::log(8.0)));
}

TEST_CASE("least squares residuals") {
  SUBCASE("no predictors centers y") {
    Vector y{{1, 2, 3}};
    Matrix z(3, 0);
    Vector r = least_squares_residuals(y, z);
    CHECK(r(0) == doctest::Approx(-1));
    CHECK(r(1) == doctest::Approx(0));
    CHECK(r(2) == doctest::Approx(1));
  }
  SUBCASE("normal equations oracle") {
    Vector y{{1, 2, 2}};
    Matrix z{{1}, {1}, {0}};
    // ZᵀZ = 2, Zᵀy = 3, so β = 1.5 and the residual is y − 1.5 z.
    const double beta = (z.col(0).dot(y)) / z.col(0).squaredNorm();
    CHECK(least_squares_fit(y, z)(0) == doctest::Approx(beta));
    Vector r = least_squares_residuals(y, z);
    CHECK(r(0) == doctest::Approx(-0.5));
    CHECK(r(1) == doctest::Approx(0.5));
    CHECK(r(2) == doctest::Approx(2.0));
  }
  SUBCASE("exact fit gives zeros") {
    Matrix z{{1, 0}, {0, 1}, {1, 1}, {2, -1}};
    Vector c{{0.3, -1.7}};
    Vector y = z * c;
    CHECK(least_squares_residuals(y, z).cwiseAbs().maxCoeff() <= 1e-10);
  }
  SUBCASE("row mismatch") {
    Vector y{{1, 2, 3}};
    Matrix z(2, 1);
    CHECK_THROWS_AS(least_squares_residuals(y, z), ContractViolation);
  }
  SUBCASE("rank-deficient design does not throw") {
    Matrix z(5, 2);
    z.col(0) << 1, 2, 3, 4, 5;
    z.col(1) = 2 * z.col(0);
    Vector y{{1, 0, 2, 1, 3}};
    Vector r = least_squares_residuals(y, z);
    CHECK(r.allFinite());
    CHECK(std::abs(z.col(0).dot(r)) < 1e-8);
  }
}

TEST_CASE("residuals are orthogonal to the design") {
  Rng rng(3);
  for (int trial = 0; trial < 40; ++trial) {
    const Index n = 20 + trial, q = 1 + trial % 5;
    Matrix z(n, q);
    Vector y(n);
    for (Index i = 0; i < n; ++i) {
      y(i) = rng.normal();
      for (Index j = 0; j < q; ++j) z(i, j) = rng.normal();
    }
    Vector r = least_squares_residuals(y, z);
    CHECK((z.transpose() * r).cwiseAbs().maxCoeff() <= 1e-8 * y.norm());
  }
}

TEST_CASE("pearson correlation") {
  Vector u{{1, 2, 3}};
  CHECK(pearson_correlation(u, u) == doctest::Approx(1.0));
  CHECK(pearson_correlation(u, Vector{{3, 2, 1}}) == doctest::Approx(-1.0));
  CHECK(pearson_correlation(u, Vector{{1, 2, 4}}) == doctest::Approx(0.98198).epsilon(1e-5));
  CHECK(pearson_correlation(u, Vector{{5, 5, 5}}) == 0.0);
  CHECK_THROWS_AS(pearson_correlation(u, Vector{{1, 2}}), ContractViolation);
}

TEST_CASE("pearson correlation is symmetric and affine invariant") {
  Rng rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    const Index n = 3 + trial % 20;
    Vector u(n), v(n);
    for (Index i = 0; i < n; ++i) {
      u(i) = rng.normal();
      v(i) = rng.normal() + 0.5 * u(i);
    }
    const double r = pearson_correlation(u, v);
    const double a = rng.uniform(0.1, 10.0), b = rng.uniform(-5.0, 5.0);
    Vector w = (a * u.array() + b).matrix();
    Vector m = (-a * u.array() + b).matrix();
    CHECK(r >= -1.0);
    CHECK(r <= 1.0);
    CHECK(pearson_correlation(v, u) == doctest::Approx(r).epsilon(1e-12));
    CHECK(pearson_correlation(w, v) == doctest::Approx(r).epsilon(1e-9));
    CHECK(pearson_correlation(m, v) == doctest::Approx(-r).epsilon(1e-9));
  }
}
