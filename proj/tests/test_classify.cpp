#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "gstep/classify.hpp"
#include "gstep/random.hpp"

using namespace gstep;

namespace {

LabeledDataset two_groups(Index n1, Index n2, Index p, std::uint64_t seed) {
  Rng rng(seed);
  LabeledDataset d;
  d.data.resize(n1 + n2, p);
  for (Index i = 0; i < n1 + n2; ++i) {
    d.labels.push_back(i < n1 ? 1 : 2);
    for (Index j = 0; j < p; ++j) d.data(i, j) = rng.normal();
  }
  return d;
}

}  // namespace

TEST_CASE("welch t screening") {
  SUBCASE("identical groups give zero statistics and index order") {
    LabeledDataset d;
    d.data.resize(6, 4);
    for (Index r = 0; r < 6; ++r) d.data.row(r) << 1.0 * (r % 3), 2.0 * (r % 3), -1.0 * (r % 3), 0.5 * (r % 3);
    d.labels = {1, 1, 1, 2, 2, 2};
    CHECK(welch_t_statistics(d).cwiseAbs().maxCoeff() == 0.0);
    CHECK(t_screen(d, 2) == std::vector<Index>{0, 1});
  }
  SUBCASE("constant features give zero") {
    auto d = two_groups(5, 5, 3, 1);
    d.data.col(1).setConstant(4.0);
    CHECK(welch_t_statistics(d)(1) == 0.0);
  }
  SUBCASE("a strongly shifted feature ranks first") {
    int first = 0;
    for (std::uint64_t s = 1; s <= 10; ++s) {
      auto d = two_groups(15, 15, 20, s);
      for (Index r = 0; r < 15; ++r) d.data(r, 7) += 10.0;
      first += t_screen(d, 5).front() == 7;
    }
    CHECK(first >= 9);
  }
  SUBCASE("m = p keeps every feature") {
    auto d = two_groups(6, 7, 5, 3);
    auto sel = t_screen(d, 5);
    std::sort(sel.begin(), sel.end());
    CHECK(sel == std::vector<Index>{0, 1, 2, 3, 4});
  }
  SUBCASE("selection is a set of distinct indices, stable under within-group row permutation") {
    auto d = two_groups(10, 12, 30, 4);
    auto sel = t_screen(d, 8);
    CHECK(std::set<Index>(sel.begin(), sel.end()).size() == 8);
    std::vector<Index> rows(22);
    for (Index r = 0; r < 22; ++r) rows[static_cast<std::size_t>(r)] = r;
    std::reverse(rows.begin(), rows.begin() + 10);
    std::reverse(rows.begin() + 10, rows.end());
    CHECK(t_screen(d.select_rows(rows), 8) == sel);
  }
}

TEST_CASE("standardization") {
  auto train = two_groups(10, 10, 3, 5);
  train.data.col(0) = (train.data.col(0).array() * 2.0 + 5.0).matrix();
  auto test = two_groups(2, 2, 3, 6);
  auto s = standardize(train, test);
  for (Index j = 0; j < 3; ++j) {
    const auto c = s.train.data.col(j);
    CHECK(std::abs(c.mean()) < 1e-12);
    CHECK((c.array() - c.mean()).matrix().squaredNorm() / 19.0 == doctest::Approx(1.0));
  }
  // Applying the training statistics again to the raw test set gives the same result.
  auto again = standardize(train, test);
  CHECK(again.test.data == s.test.data);
  CHECK(s.test.data(0, 0) == doctest::Approx((test.data(0, 0) - s.means(0)) / s.sds(0)));

  train.data.col(1).setConstant(3.0);
  auto dropped = standardize(train, test);
  CHECK(dropped.kept == std::vector<Index>{0, 2});
  CHECK(dropped.warnings.size() == 1);
  CHECK(dropped.test.p() == 2);
}

TEST_CASE("lda scores and rule") {
  SUBCASE("balanced priors") {
    auto d = two_groups(4, 4, 2, 1);
    auto model = lda_fit(d, Matrix::Identity(2, 2));
    CHECK(model.log_prior_1 == doctest::Approx(std::log(0.5)));
    CHECK(model.log_prior_2 == doctest::Approx(std::log(0.5)));
  }
  SUBCASE("equal means leave only the prior difference") {
    LdaModel model;
    model.mean_1 = model.mean_2 = Vector{{0.3, -1.0}};
    model.omega_hat = Matrix{{2.0, 0.5}, {0.5, 1.0}};
    model.log_prior_1 = std::log(0.3);
    model.log_prior_2 = std::log(0.7);
    Rng rng(3);
    for (int k = 0; k < 10; ++k) {
      Vector x{{rng.normal(), rng.normal()}};
      auto s = lda_score(model, x);
      CHECK(s.group_1 - s.group_2 == doctest::Approx(std::log(0.3) - std::log(0.7)));
    }
  }
  SUBCASE("scalar case classifies by sign") {
    LdaModel model;
    model.mean_1 = Vector{{1.0}};
    model.mean_2 = Vector{{-1.0}};
    model.omega_hat = Matrix{{1.0}};
    model.log_prior_1 = model.log_prior_2 = std::log(0.5);
    LabeledDataset test;
    test.data = Matrix{{2.0}, {0.1}, {-0.1}, {-3.0}, {0.0}};
    auto pred = lda_predict(model, test);
    CHECK(pred.labels == std::vector<int>{1, 1, 2, 2, 2});
  }
  SUBCASE("points at the training means are classified correctly") {
    LabeledDataset train;
    train.data = Matrix{{3, 0}, {5, 0}, {-3, 1}, {-5, -1}};
    train.labels = {1, 1, 2, 2};
    auto model = lda_fit(train, Matrix::Identity(2, 2));
    LabeledDataset test;
    test.data = Matrix{{4, 0}, {-4, 0}};
    test.labels = {1, 2};
    auto pred = lda_predict(model, test);
    CHECK(pred.mcc == 1.0);
    CHECK(pred.sensitivity == 1.0);
    CHECK(pred.specificity == 1.0);
  }
  SUBCASE("all-one-class predictions have zero mcc") {
    auto c = classification_counts({1, 2, 2, 1}, {2, 2, 2, 2});
    CHECK(mcc(c) == 0.0);
  }
  SUBCASE("an empty group is rejected") {
    auto d = two_groups(4, 0, 2, 1);
    CHECK_THROWS_AS(lda_fit(d, Matrix::Identity(2, 2)), ContractViolation);
  }
}

TEST_CASE("two-class fixture") {
  auto d = make_two_class_fixture(20, 30, 40, 1.0, 5, 3);
  CHECK(d.n() == 70);
  CHECK(d.p() == 20);
  CHECK(d.group_size(1) == 30);
  CHECK(d.group_size(2) == 40);
  auto again = make_two_class_fixture(20, 30, 40, 1.0, 5, 3);
  CHECK(again.data == d.data);
  CHECK(again.labels == d.labels);
}

TEST_CASE("one lda repetition") {
  auto d = make_two_class_fixture(20, 30, 60, 1.5, 5, 11);
  LdaWorkflow w;
  w.screen = 10;
  w.grid = CvGrid::cross({0.2, 0.4, 0.95}, {0.1});
  auto rep = run_lda_repetition(d, w, 5);
  CHECK(rep.prediction.labels.size() == 21);
  CHECK(rep.prediction.counts.total() == 21);
  CHECK(rep.prediction.mcc >= -1.0);
  CHECK(rep.prediction.mcc <= 1.0);
  auto same = run_lda_repetition(d, w, 5);
  CHECK(same.prediction.labels == rep.prediction.labels);
}
