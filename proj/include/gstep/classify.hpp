#pragma once

// Two-class linear discriminant analysis with a stepwise-estimated
// precision matrix, plus the screening and standardization steps that
// precede it.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gstep/metrics.hpp"
#include "gstep/threshold_cv.hpp"

namespace gstep {

/// Rows of `data` carry a group tag 1 or 2. Group 1 is the positive class.
struct LabeledDataset {
  Matrix data;
  std::vector<int> labels;
  std::vector<std::string> feature_names;

  Index n() const { return data.rows(); }
  Index p() const { return data.cols(); }
  Index group_size(int group) const;
  /// Rows restricted to the given feature columns.
  LabeledDataset select_features(const std::vector<Index>& features) const;
  LabeledDataset select_rows(const std::vector<Index>& rows) const;
};

/// Welch two-sample t statistic per feature; 0 when both groups are constant.
Vector welch_t_statistics(const LabeledDataset& train);

/// Indices of the m features with largest |t|, ties to the smaller index.
std::vector<Index> t_screen(const LabeledDataset& train, Index m = 50);

struct Standardized {
  LabeledDataset train;
  LabeledDataset test;
  /// Original feature indices kept (zero training sd columns are dropped).
  std::vector<Index> kept;
  Vector means;
  Vector sds;
  std::vector<std::string> warnings;
};

/// Centers and scales both sets with training means and standard deviations.
Standardized standardize(const LabeledDataset& train, const LabeledDataset& test);

struct LdaModel {
  Vector mean_1;
  Vector mean_2;
  Matrix omega_hat;
  double log_prior_1 = 0.0;
  double log_prior_2 = 0.0;
};

LdaModel lda_fit(const LabeledDataset& train, const Matrix& omega_hat);

struct LdaScores {
  double group_1 = 0.0;
  double group_2 = 0.0;
};

/// δ_r(x) = xᵀΩ̂μ̂_r − ½ μ̂_rᵀΩ̂μ̂_r + log π̂_r.
LdaScores lda_score(const LdaModel& model, const Vector& x);

struct LdaPrediction {
  std::vector<int> labels;
  ConfusionCounts counts;
  double sensitivity = 0.0;
  double specificity = 0.0;
  double mcc = 0.0;
};

/// Arg-max of the two scores; exact ties go to the group with the larger
/// prior (group 2 when priors are equal). Metrics treat group 1 as positive.
LdaPrediction lda_predict(const LdaModel& model, const LabeledDataset& test);

/// Confusion of predicted versus true labels with group 1 as positive.
ConfusionCounts classification_counts(const std::vector<int>& truth,
                                      const std::vector<int>& predicted);

struct LdaWorkflow {
  Index screen = 50;
  Index test_group_1 = 5;
  Index test_group_2 = 16;
  Index folds = 5;
  CvGrid grid = CvGrid::standard();
  unsigned threads = 1;
};

struct LdaRepetition {
  std::uint64_t seed = 0;
  LdaPrediction prediction;
  Thresholds thresholds{1.0, 0.0};
  std::size_t edges = 0;
};

/// One random split: screen, standardize, select thresholds by CV on the
/// within-group-centered training data, fit the precision matrix, classify.
LdaRepetition run_lda_repetition(const LabeledDataset& dataset, const LdaWorkflow& workflow,
                                 std::uint64_t seed);

/// Two Gaussian classes sharing a block-diagonal (BG) covariance; group 1 is
/// shifted by `shift` on the first `shifted` features.
LabeledDataset make_two_class_fixture(Index p, Index n_group_1, Index n_group_2, double shift,
                                      Index shifted, std::uint64_t seed);

}  // namespace gstep
