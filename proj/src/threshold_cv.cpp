#include "gstep/threshold_cv.hpp"

#include <limits>
#include <numeric>

#include "gstep/parallel.hpp"
#include "gstep/random.hpp"

namespace gstep {

std::vector<Index> FoldPlan::members(Index fold) const {
  std::vector<Index> out;
  for (std::size_t r = 0; r < assignment.size(); ++r) {
    if (assignment[r] == fold) out.push_back(static_cast<Index>(r));
  }
  return out;
}

std::vector<Index> FoldPlan::complement(Index fold) const {
  std::vector<Index> out;
  for (std::size_t r = 0; r < assignment.size(); ++r) {
    if (assignment[r] != fold) out.push_back(static_cast<Index>(r));
  }
  return out;
}

std::vector<Index> FoldPlan::sizes() const {
  std::vector<Index> out(static_cast<std::size_t>(folds), 0);
  for (Index a : assignment) ++out[static_cast<std::size_t>(a)];
  return out;
}

CvGrid CvGrid::cross(const std::vector<double>& forward, const std::vector<double>& backward) {
  CvGrid grid;
  for (double f : forward) {
    for (double b : backward) {
      if (b < f) grid.pairs.emplace_back(f, b);
    }
  }
  if (grid.pairs.empty()) throw ContractViolation("threshold grid is empty");
  return grid;
}

CvGrid CvGrid::standard() {
  std::vector<double> axis(20);
  for (std::size_t i = 0; i < axis.size(); ++i) axis[i] = 0.05 + 0.9 * static_cast<double>(i) / 19.0;
  return cross(axis, axis);
}

FoldPlan make_folds(Index n, Index folds, std::uint64_t seed) {
  if (folds < 2) throw ContractViolation("make_folds: need at least 2 folds");
  if (n < 2 * folds) {
    throw ContractViolation("make_folds: n = " + std::to_string(n) + " cannot give " +
                            std::to_string(folds) + " folds of size >= 2");
  }
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  Rng rng(seed);
  rng.shuffle(order.begin(), order.end());
  FoldPlan plan;
  plan.folds = folds;
  plan.seed = seed;
  plan.assignment.assign(static_cast<std::size_t>(n), 0);
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    plan.assignment[static_cast<std::size_t>(order[pos])] = static_cast<Index>(pos) % folds;
  }
  return plan;
}

Matrix predict_validation(const Matrix& train, const Matrix& valid,
                          const NeighborhoodSystem& neighborhoods) {
  if (train.cols() != valid.cols() || neighborhoods.p() != train.cols()) {
    throw ContractViolation("predict_validation: column count mismatch");
  }
  const Eigen::RowVectorXd means = train.colwise().mean();
  const Matrix train_c = train.rowwise() - means;
  const Matrix valid_c = valid.rowwise() - means;
  Matrix predicted(valid.rows(), valid.cols());
  for (Node j = 0; j < train.cols(); ++j) {
    const auto& set = neighborhoods.neighbors(j);
    predicted.col(j).setConstant(means(j));
    if (set.empty()) continue;
    const Vector beta = least_squares_fit(train_c.col(j), train_c(Eigen::all, set));
    predicted.col(j) += valid_c(Eigen::all, set) * beta;
  }
  return predicted;
}

namespace {

struct FoldData {
  Matrix train;
  Matrix valid;
};

std::vector<FoldData> split_folds(const Matrix& data, const FoldPlan& folds) {
  if (static_cast<Index>(folds.assignment.size()) != data.rows()) {
    throw ContractViolation("fold plan does not match the number of rows");
  }
  std::vector<FoldData> out;
  for (Index t = 0; t < folds.folds; ++t) {
    out.push_back({data(folds.complement(t), Eigen::all), data(folds.members(t), Eigen::all)});
  }
  return out;
}

double score_folds(const std::vector<FoldData>& folds, Index n, const Thresholds& thresholds,
                   const GsaOptions& options) {
  double total = 0.0;
  for (const auto& fold : folds) {
    const auto path = select_neighborhoods(fold.train, thresholds, options);
    total += (fold.valid - predict_validation(fold.train, fold.valid, path.neighborhoods))
                 .squaredNorm();
  }
  return total / static_cast<double>(n);
}

}  // namespace

double cv_score(const Matrix& data, const FoldPlan& folds, const Thresholds& thresholds,
                const GsaOptions& options) {
  return score_folds(split_folds(data, folds), data.rows(), thresholds, options);
}

CvResult select_thresholds(const Matrix& data, Index folds, const CvGrid& grid,
                           std::uint64_t seed, const CvOptions& options) {
  if (grid.pairs.empty()) throw ContractViolation("select_thresholds: empty grid");
  CvResult result;
  result.fold_plan = make_folds(data.rows(), folds, seed);
  const auto split = split_folds(data, result.fold_plan);

  std::vector<double> scores(grid.pairs.size(), std::numeric_limits<double>::quiet_NaN());
  std::vector<std::string> errors(grid.pairs.size());
  parallel_for(grid.pairs.size(), options.threads, [&](std::size_t k) {
    try {
      scores[k] = score_folds(split, data.rows(), grid.pairs[k], options.gsa);
    } catch (const NumericalError& e) {
      errors[k] = e.what();
    }
  });

  bool found = false;
  for (std::size_t k = 0; k < grid.pairs.size(); ++k) {
    const auto& t = grid.pairs[k];
    const ThresholdKey key{t.forward(), t.backward()};
    if (!errors[k].empty()) {
      result.failures.push_back({key, errors[k]});
      continue;
    }
    result.scores[key] = scores[k];
    const bool better =
        !found || scores[k] < result.best_score ||
        (scores[k] == result.best_score &&
         (t.forward() > result.best.forward() ||
          (t.forward() == result.best.forward() && t.backward() > result.best.backward())));
    if (better) {
      result.best = t;
      result.best_score = scores[k];
      found = true;
    }
  }
  if (!found) throw NumericalError("threshold selection failed at every grid point");
  return result;
}

}  // namespace gstep
