#include <doctest.h>

#include <cmath>

#include "gstep/graph_model.hpp"
#include "gstep/gsa.hpp"
#include "gstep/random.hpp"

using namespace gstep;

namespace {

void check_model_invariants(const PrecisionModel& m) {
  const Index p = m.p;
  CHECK(m.omega.isApprox(m.omega.transpose(), 0.0));
  CHECK(m.sigma.rows() == p);
  CHECK((m.sigma * m.omega - Matrix::Identity(p, p)).cwiseAbs().maxCoeff() <= 1e-6 * p);
  CHECK(support_of(m.omega) == m.edges);
  CHECK_NOTHROW(cholesky(m.omega));
  for (const auto& [i, l] : m.edges) {
    CHECK(i < l);
    CHECK(l < p);
  }
}

}  // namespace

TEST_CASE("edge sets store unordered pairs") {
  EdgeSet e(4);
  e.insert(2, 1);
  e.insert(1, 2);
  CHECK(e.size() == 1);
  CHECK(e.contains(1, 2));
  CHECK(e.contains(2, 1));
  CHECK(e.pairs().begin()->first == 1);
  CHECK(e.pair_count() == 6);
  CHECK_THROWS_AS(e.insert(1, 1), ContractViolation);
  CHECK_THROWS_AS(e.insert(0, 4), ContractViolation);
  e.erase(2, 1);
  CHECK(e.empty());
}

TEST_CASE("ar1 model") {
  SUBCASE("covariance entries") {
    const auto m = gen_ar1(3, 0.4);
    CHECK(m.sigma(0, 2) == doctest::Approx(0.16));
    CHECK(m.sigma(1, 1) == doctest::Approx(1.0));
  }
  SUBCASE("two nodes give one edge") {
    const auto m = gen_ar1(2, 0.7);
    CHECK(m.edges.size() == 1);
    CHECK(m.edges.contains(0, 1));
  }
  SUBCASE("closed-form tridiagonal precision") {
    const double rho = 0.4;
    const auto m = gen_ar1(5, rho);
    for (Index i = 1; i < 4; ++i) {
      CHECK(m.omega(i, i) == doctest::Approx((1 + rho * rho) / (1 - rho * rho)));
      CHECK(m.omega(i, i) == doctest::Approx(1.380952).epsilon(1e-6));
    }
    for (Index i = 0; i < 4; ++i) {
      CHECK(m.omega(i, i + 1) == doctest::Approx(-0.476190).epsilon(1e-6));
    }
    for (Index i = 0; i < 5; ++i)
      for (Index l = i + 2; l < 5; ++l) CHECK(m.omega(i, l) == 0.0);
    CHECK(m.edges.size() == 4);
  }
  SUBCASE("adjacent partial correlation") {
    const double rho = 0.4;
    const auto m = gen_ar1(7, rho);
    CHECK(std::abs(partial_corr_oracle(m.omega, 3, 4) - rho / (1 + rho * rho)) <= 1e-9);
    CHECK(partial_corr_oracle(m.omega, 3, 4) == doctest::Approx(0.344828).epsilon(1e-6));
  }
}

TEST_CASE("bg model") {
  const auto m = gen_bg(50, 5);
  CHECK(m.edges.size() == 100);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(m.omega.topLeftCorner(5, 5));
  CHECK(eig.eigenvalues()(0) == doctest::Approx(0.5));
  CHECK(eig.eigenvalues()(4) == doctest::Approx(3.0));
  CHECK(gen_bg(10, 5).edges.size() == 20);
  CHECK(gen_bg(5, 5).edges.size() == 10);
  CHECK(m.omega(0, 5) == 0.0);
  CHECK(m.omega(0, 1) == 0.5);
  CHECK_THROWS_AS(gen_bg(49, 5), ContractViolation);
}

TEST_CASE("nn2 model") {
  const auto a = gen_nn2(30, 9);
  const auto b = gen_nn2(30, 9);
  CHECK(a.omega == b.omega);
  CHECK(a.edges == b.edges);
  for (Index i = 0; i < a.p; ++i) CHECK(a.omega(i, i) == doctest::Approx(1.0));
  Eigen::SelfAdjointEigenSolver<Matrix> eig(a.omega);
  CHECK(eig.eigenvalues().minCoeff() > 0.0);
  // Every node has at least its own two nearest neighbours.
  for (Index i = 0; i < a.p; ++i) {
    Index degree = 0;
    for (Index l = 0; l < a.p; ++l) degree += (l != i && a.edges.contains(i, l));
    CHECK(degree >= 2);
  }
  int distinct = 0;
  for (std::uint64_t s = 1; s <= 20; ++s) distinct += gen_nn2(30, s).edges != a.edges;
  CHECK(distinct >= 19);
}

TEST_CASE("generated models satisfy the model invariants") {
  for (Index p : {Index{10}, Index{50}}) {
    check_model_invariants(gen_ar1(p));
    check_model_invariants(gen_bg(p, 5));
    check_model_invariants(gen_nn2(p, 123));
  }
}

TEST_CASE("support of a matrix") {
  CHECK(support_of(Matrix::Identity(4, 4)).empty());
  CHECK(support_of(gen_ar1(5).omega).size() == 4);
  CHECK(support_of(gen_bg(10, 5).omega).size() == 20);
}

TEST_CASE("make_precision_model rejects invalid matrices") {
  Matrix asym{{1, 0.1}, {0.2, 1}};
  CHECK_THROWS_AS(make_precision_model(asym, "x"), ContractViolation);
  Matrix indefinite{{1, 2}, {2, 1}};
  CHECK_THROWS_AS(make_precision_model(indefinite, "x"), NotPositiveDefinite);
}

TEST_CASE("mvn sampling") {
  const auto m = gen_ar1(4, 0.5);
  const auto a = sample_mvn(m, 50, 42);
  const auto b = sample_mvn(m, 50, 42);
  CHECK(a.n() == 50);
  CHECK(a.p() == 4);
  CHECK(a.data == b.data);
  CHECK(sample_mvn(m, 50, 43).data != a.data);

  const auto big = sample_mvn(m, 40000, 7);
  const Matrix x = centered(big.data);
  CHECK(x.colwise().sum().cwiseAbs().maxCoeff() < 1e-8);
  const Matrix s = x.transpose() * x / static_cast<double>(x.rows());
  CHECK((s - m.sigma).cwiseAbs().maxCoeff() < 0.05);
}

TEST_CASE("replicate seeds") {
  CHECK(split_seed(5, 0) == 5);
  CHECK(split_seed(5, 2) == 5 + 2 * 2654435761ULL);
  Rng a(1), b(1);
  for (int i = 0; i < 10; ++i) CHECK(a.normal() == b.normal());
  Rng c(2);
  for (int i = 0; i < 1000; ++i) {
    const auto k = c.below(7);
    CHECK(k < 7);
    const double u = c.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}
