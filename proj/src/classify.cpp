#include "gstep/classify.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "gstep/random.hpp"

namespace gstep {

Index LabeledDataset::group_size(int group) const {
  return static_cast<Index>(std::count(labels.begin(), labels.end(), group));
}

LabeledDataset LabeledDataset::select_features(const std::vector<Index>& features) const {
  LabeledDataset out;
  out.data = data(Eigen::all, features);
  out.labels = labels;
  if (!feature_names.empty()) {
    for (Index f : features) out.feature_names.push_back(feature_names.at(static_cast<std::size_t>(f)));
  }
  return out;
}

LabeledDataset LabeledDataset::select_rows(const std::vector<Index>& rows) const {
  LabeledDataset out;
  out.data = data(rows, Eigen::all);
  for (Index r : rows) out.labels.push_back(labels.at(static_cast<std::size_t>(r)));
  out.feature_names = feature_names;
  return out;
}

namespace {

void require_labels(const LabeledDataset& d, const char* who) {
  if (static_cast<Index>(d.labels.size()) != d.n()) {
    throw ContractViolation(std::string(who) + ": label count does not match rows");
  }
  for (int g : d.labels) {
    if (g != 1 && g != 2) throw ContractViolation(std::string(who) + ": labels must be 1 or 2");
  }
}

std::vector<Index> rows_of(const LabeledDataset& d, int group) {
  std::vector<Index> out;
  for (std::size_t r = 0; r < d.labels.size(); ++r) {
    if (d.labels[r] == group) out.push_back(static_cast<Index>(r));
  }
  return out;
}

}  // namespace

Vector welch_t_statistics(const LabeledDataset& train) {
  require_labels(train, "t_screen");
  const auto g1 = rows_of(train, 1);
  const auto g2 = rows_of(train, 2);
  if (g1.size() < 2 || g2.size() < 2) {
    throw ContractViolation("t_screen: each group needs at least two samples");
  }
  const Matrix a = train.data(g1, Eigen::all);
  const Matrix b = train.data(g2, Eigen::all);
  const auto n1 = static_cast<double>(a.rows()), n2 = static_cast<double>(b.rows());
  const Eigen::RowVectorXd m1 = a.colwise().mean(), m2 = b.colwise().mean();
  const Eigen::RowVectorXd v1 = (a.rowwise() - m1).colwise().squaredNorm() / (n1 - 1.0);
  const Eigen::RowVectorXd v2 = (b.rowwise() - m2).colwise().squaredNorm() / (n2 - 1.0);
  Vector t(train.p());
  for (Index j = 0; j < train.p(); ++j) {
    const double se2 = v1(j) / n1 + v2(j) / n2;
    t(j) = se2 > 0.0 ? (m1(j) - m2(j)) / std::sqrt(se2) : 0.0;
  }
  return t;
}

std::vector<Index> t_screen(const LabeledDataset& train, Index m) {
  if (m < 1 || m > train.p()) throw ContractViolation("t_screen: m must lie in [1, p]");
  const Vector t = welch_t_statistics(train).cwiseAbs();
  std::vector<Index> order(static_cast<std::size_t>(train.p()));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return t(a) > t(b); });
  order.resize(static_cast<std::size_t>(m));
  return order;
}

Standardized standardize(const LabeledDataset& train, const LabeledDataset& test) {
  if (train.p() != test.p()) throw ContractViolation("standardize: feature counts differ");
  if (train.n() < 2) throw ContractViolation("standardize: need at least two training rows");
  Standardized out;
  const Eigen::RowVectorXd means = train.data.colwise().mean();
  const Eigen::RowVectorXd sds =
      ((train.data.rowwise() - means).colwise().squaredNorm() / static_cast<double>(train.n() - 1))
          .cwiseSqrt();
  for (Index j = 0; j < train.p(); ++j) {
    if (sds(j) > 0.0) {
      out.kept.push_back(j);
    } else {
      out.warnings.push_back("feature " + std::to_string(j) +
                             " has zero training standard deviation and was dropped");
    }
  }
  out.means = means(out.kept).transpose();
  out.sds = sds(out.kept).transpose();
  auto transform = [&](const LabeledDataset& d) {
    LabeledDataset t = d.select_features(out.kept);
    t.data = (t.data.rowwise() - out.means.transpose()).array().rowwise() /
             out.sds.transpose().array();
    return t;
  };
  out.train = transform(train);
  out.test = transform(test);
  return out;
}

LdaModel lda_fit(const LabeledDataset& train, const Matrix& omega_hat) {
  require_labels(train, "lda_fit");
  if (omega_hat.rows() != train.p() || omega_hat.cols() != train.p()) {
    throw ContractViolation("lda_fit: precision matrix does not match the feature count");
  }
  const auto g1 = rows_of(train, 1);
  const auto g2 = rows_of(train, 2);
  if (g1.empty() || g2.empty()) throw ContractViolation("lda_fit: both groups must be present");
  LdaModel model;
  model.mean_1 = train.data(g1, Eigen::all).colwise().mean().transpose();
  model.mean_2 = train.data(g2, Eigen::all).colwise().mean().transpose();
  model.omega_hat = omega_hat;
  const auto n = static_cast<double>(train.n());
  model.log_prior_1 = std::log(static_cast<double>(g1.size()) / n);
  model.log_prior_2 = std::log(static_cast<double>(g2.size()) / n);
  return model;
}

LdaScores lda_score(const LdaModel& model, const Vector& x) {
  if (x.size() != model.mean_1.size()) throw ContractViolation("lda_score: dimension mismatch");
  const Vector w1 = model.omega_hat * model.mean_1;
  const Vector w2 = model.omega_hat * model.mean_2;
  return {x.dot(w1) - 0.5 * model.mean_1.dot(w1) + model.log_prior_1,
          x.dot(w2) - 0.5 * model.mean_2.dot(w2) + model.log_prior_2};
}

ConfusionCounts classification_counts(const std::vector<int>& truth,
                                      const std::vector<int>& predicted) {
  if (truth.size() != predicted.size()) throw ContractViolation("label lists differ in length");
  ConfusionCounts c;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const bool actual = truth[i] == 1, called = predicted[i] == 1;
    if (actual && called) ++c.tp;
    else if (!actual && !called) ++c.tn;
    else if (called) ++c.fp;
    else ++c.fn;
  }
  return c;
}

LdaPrediction lda_predict(const LdaModel& model, const LabeledDataset& test) {
  LdaPrediction out;
  const int tie_group = model.log_prior_1 > model.log_prior_2 ? 1 : 2;
  for (Index r = 0; r < test.n(); ++r) {
    const auto s = lda_score(model, test.data.row(r).transpose());
    out.labels.push_back(s.group_1 > s.group_2 ? 1 : s.group_2 > s.group_1 ? 2 : tie_group);
  }
  if (!test.labels.empty()) {
    out.counts = classification_counts(test.labels, out.labels);
    out.sensitivity = sensitivity(out.counts);
    out.specificity = specificity(out.counts);
    out.mcc = mcc(out.counts);
  }
  return out;
}

LdaRepetition run_lda_repetition(const LabeledDataset& dataset, const LdaWorkflow& workflow,
                                 std::uint64_t seed) {
  require_labels(dataset, "lda");
  auto g1 = rows_of(dataset, 1);
  auto g2 = rows_of(dataset, 2);
  if (g1.empty() || g2.empty()) throw ContractViolation("lda: both classes must be present");
  if (static_cast<Index>(g1.size()) < workflow.test_group_1 + 2 ||
      static_cast<Index>(g2.size()) < workflow.test_group_2 + 2) {
    throw ContractViolation("lda: too few rows to hold out the requested test set");
  }
  Rng rng(seed);
  rng.shuffle(g1.begin(), g1.end());
  rng.shuffle(g2.begin(), g2.end());
  std::vector<Index> test_rows(g1.begin(), g1.begin() + workflow.test_group_1);
  test_rows.insert(test_rows.end(), g2.begin(), g2.begin() + workflow.test_group_2);
  std::vector<Index> train_rows(g1.begin() + workflow.test_group_1, g1.end());
  train_rows.insert(train_rows.end(), g2.begin() + workflow.test_group_2, g2.end());
  std::sort(test_rows.begin(), test_rows.end());
  std::sort(train_rows.begin(), train_rows.end());

  const auto train_all = dataset.select_rows(train_rows);
  const auto test_all = dataset.select_rows(test_rows);
  const auto features = t_screen(train_all, std::min(workflow.screen, dataset.p()));
  auto scaled = standardize(train_all.select_features(features), test_all.select_features(features));

  // Common-covariance model: estimate the precision from group-centered rows.
  Matrix pooled = scaled.train.data;
  for (int group : {1, 2}) {
    const auto rows = rows_of(scaled.train, group);
    const Eigen::RowVectorXd mean = pooled(rows, Eigen::all).colwise().mean();
    for (Index r : rows) pooled.row(r) -= mean;
  }
  CvOptions cv;
  cv.threads = workflow.threads;
  const auto selection = select_thresholds(pooled, workflow.folds, workflow.grid, seed, cv);
  const auto fit = run_gsa(pooled, selection.best);

  LdaRepetition out;
  out.seed = seed;
  out.thresholds = selection.best;
  out.edges = fit.edges.size();
  out.prediction = lda_predict(lda_fit(scaled.train, fit.omega_hat), scaled.test);
  return out;
}

LabeledDataset make_two_class_fixture(Index p, Index n_group_1, Index n_group_2, double shift,
                                      Index shifted, std::uint64_t seed) {
  if (n_group_1 < 1 || n_group_2 < 1) throw ContractViolation("fixture: empty class");
  if (shifted < 0 || shifted > p) throw ContractViolation("fixture: shifted count exceeds p");
  const auto model = gen_bg(p);
  const auto a = sample_mvn(model, n_group_1, seed);
  const auto b = sample_mvn(model, n_group_2, split_seed(seed, 1));
  LabeledDataset out;
  out.data.resize(n_group_1 + n_group_2, p);
  out.data.topRows(n_group_1) = a.data;
  out.data.topRows(n_group_1).leftCols(shifted).array() += shift;
  out.data.bottomRows(n_group_2) = b.data;
  out.labels.assign(static_cast<std::size_t>(n_group_1), 1);
  out.labels.insert(out.labels.end(), static_cast<std::size_t>(n_group_2), 2);
  for (Index j = 0; j < p; ++j) out.feature_names.push_back("x" + std::to_string(j + 1));
  return out;
}

}  // namespace gstep
