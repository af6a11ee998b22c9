#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "gstep/gsa.hpp"

namespace gstep {

/// Balanced random assignment of n rows to K folds.
struct FoldPlan {
  Index folds = 0;
  std::vector<Index> assignment;
  std::uint64_t seed = 0;

  std::vector<Index> members(Index fold) const;
  std::vector<Index> complement(Index fold) const;
  std::vector<Index> sizes() const;
};

/// Candidate (forward, backward) pairs.
struct CvGrid {
  std::vector<Thresholds> pairs;

  /// Every (f, b) with f from `forward`, b from `backward` and b < f.
  static CvGrid cross(const std::vector<double>& forward, const std::vector<double>& backward);
  /// 20 equispaced values in [0.05, 0.95] per axis, crossed.
  static CvGrid standard();
};

using ThresholdKey = std::pair<double, double>;

struct CvFailure {
  ThresholdKey thresholds;
  std::string reason;
};

struct CvResult {
  Thresholds best{1.0, 0.0};
  double best_score = 0.0;
  std::map<ThresholdKey, double> scores;
  std::vector<CvFailure> failures;
  FoldPlan fold_plan;
};

struct CvOptions {
  GsaOptions gsa;
  unsigned threads = 1;
};

FoldPlan make_folds(Index n, Index folds, std::uint64_t seed);

/// Predicts every validation column from its neighbourhood with
/// coefficients fitted on the centered training rows; empty neighbourhoods
/// predict the training mean.
Matrix predict_validation(const Matrix& train, const Matrix& valid,
                          const NeighborhoodSystem& neighborhoods);

/// (1/n) Σ_folds Σ_j ‖X_j − X̂_j‖² over the validation rows.
double cv_score(const Matrix& data, const FoldPlan& folds, const Thresholds& thresholds,
                const GsaOptions& options = {});

/// Arg-min of the CV score over the grid. Ties go to the larger forward
/// threshold, then the larger backward threshold. Grid points whose search
/// fails numerically are listed in `failures` and excluded.
CvResult select_thresholds(const Matrix& data, Index folds, const CvGrid& grid,
                           std::uint64_t seed, const CvOptions& options = {});

}  // namespace gstep
