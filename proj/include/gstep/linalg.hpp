#pragma once

// Dense kernels shared by every estimator in the library: regression
// residuals, Pearson correlation and Cholesky-based SPD routines.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "gstep/errors.hpp"

namespace gstep {

template <typename Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Matrix = Mat<double>;
using Vector = Vec<double>;
using Index = Eigen::Index;

/// Lower-triangular factor L of a symmetric positive-definite matrix, A = L Lᵀ.
template <typename Scalar>
class CholeskyFactor {
 public:
  explicit CholeskyFactor(Mat<Scalar> lower) : lower_(std::move(lower)) {}

  Index dim() const { return lower_.rows(); }
  const Mat<Scalar>& lower() const { return lower_; }
  Mat<Scalar> reconstruct() const { return lower_ * lower_.transpose(); }

  /// Solves A x = b.
  template <typename Derived>
  Mat<Scalar> solve(const Eigen::MatrixBase<Derived>& b) const {
    Mat<Scalar> y = lower_.template triangularView<Eigen::Lower>().solve(b);
    return lower_.transpose().template triangularView<Eigen::Upper>().solve(y);
  }

  Scalar log_determinant() const {
    return Scalar(2) * lower_.diagonal().array().log().sum();
  }

 private:
  Mat<Scalar> lower_;
};

namespace detail {

template <typename Derived>
void require_square_symmetric(const Eigen::MatrixBase<Derived>& a, const char* who) {
  using Scalar = typename Derived::Scalar;
  if (a.rows() != a.cols() || a.rows() == 0) {
    throw ContractViolation(std::string(who) + ": expected a non-empty square matrix");
  }
  const Scalar scale = std::max(Scalar(1), a.cwiseAbs().maxCoeff());
  if ((a - a.transpose()).cwiseAbs().maxCoeff() > Scalar(1e-10) * scale) {
    throw ContractViolation(std::string(who) + ": matrix is not symmetric");
  }
}

/// Centers u and scales it to unit Euclidean norm. Returns the zero vector
/// when u is constant up to rounding.
template <typename Derived>
Vec<typename Derived::Scalar> standardized(const Eigen::MatrixBase<Derived>& u) {
  using Scalar = typename Derived::Scalar;
  Vec<Scalar> centered = u.array() - u.mean();
  const Scalar sq = centered.squaredNorm();
  const Scalar peak = u.cwiseAbs().maxCoeff();
  const Scalar floor = Scalar(16) * std::numeric_limits<Scalar>::epsilon() * peak;
  if (!(sq > Scalar(u.size()) * floor * floor)) {
    return Vec<Scalar>::Zero(u.size());
  }
  return centered / std::sqrt(sq);
}

}  // namespace detail

/// Cholesky factorization with explicit pivot reporting.
template <typename Derived>
CholeskyFactor<typename Derived::Scalar> cholesky(const Eigen::MatrixBase<Derived>& a) {
  using Scalar = typename Derived::Scalar;
  detail::require_square_symmetric(a, "cholesky");
  const Index p = a.rows();
  Mat<Scalar> l = Mat<Scalar>::Zero(p, p);
  for (Index j = 0; j < p; ++j) {
    Scalar pivot = a(j, j) - l.row(j).head(j).squaredNorm();
    if (!(pivot > Scalar(0))) throw NotPositiveDefinite(j);
    const Scalar d = std::sqrt(pivot);
    l(j, j) = d;
    for (Index i = j + 1; i < p; ++i) {
      l(i, j) = (a(i, j) - l.row(i).head(j).dot(l.row(j).head(j))) / d;
    }
  }
  return CholeskyFactor<Scalar>(std::move(l));
}

template <typename Derived>
Mat<typename Derived::Scalar> invert_pd(const Eigen::MatrixBase<Derived>& a) {
  using Scalar = typename Derived::Scalar;
  const auto factor = cholesky(a);
  Mat<Scalar> inv = factor.solve(Mat<Scalar>::Identity(a.rows(), a.cols()));
  return Scalar(0.5) * (inv + inv.transpose());
}

template <typename Derived>
typename Derived::Scalar log_det_pd(const Eigen::MatrixBase<Derived>& a) {
  return cholesky(a).log_determinant();
}

/// Minimum-norm least-squares coefficients of y on the columns of Z.
template <typename DerivedY, typename DerivedZ>
Vec<typename DerivedY::Scalar> least_squares_fit(const Eigen::MatrixBase<DerivedY>& y,
                                                 const Eigen::MatrixBase<DerivedZ>& z) {
  using Scalar = typename DerivedY::Scalar;
  if (z.rows() != y.rows()) throw ContractViolation("least_squares_fit: row count mismatch");
  if (z.cols() == 0) return Vec<Scalar>(0);
  Eigen::CompleteOrthogonalDecomposition<Mat<Scalar>> cod(z);
  return cod.solve(y);
}

/// y − Zβ̂ for the minimum-norm least-squares β̂. With no predictors the
/// mean-centered y is returned. Residuals below 1e-10·‖y‖ are exact fits
/// and are snapped to zero.
template <typename DerivedY, typename DerivedZ>
Vec<typename DerivedY::Scalar> least_squares_residuals(const Eigen::MatrixBase<DerivedY>& y,
                                                       const Eigen::MatrixBase<DerivedZ>& z) {
  using Scalar = typename DerivedY::Scalar;
  if (y.cols() != 1) throw ContractViolation("least_squares_residuals: y must be a vector");
  if (z.rows() != y.rows()) {
    throw ContractViolation("least_squares_residuals: y has " + std::to_string(y.rows()) +
                            " rows but Z has " + std::to_string(z.rows()));
  }
  if (y.rows() == 0) throw ContractViolation("least_squares_residuals: empty response");
  if (z.cols() == 0) return (y.array() - y.mean()).matrix();
  Vec<Scalar> r = y - z * least_squares_fit(y, z);
  if (r.norm() <= Scalar(1e-10) * y.norm()) r.setZero();
  return r;
}

/// Sample Pearson correlation; 0 when either input has no variance.
template <typename DerivedU, typename DerivedV>
typename DerivedU::Scalar pearson_correlation(const Eigen::MatrixBase<DerivedU>& u,
                                              const Eigen::MatrixBase<DerivedV>& v) {
  using Scalar = typename DerivedU::Scalar;
  if (u.size() != v.size()) throw ContractViolation("pearson_correlation: length mismatch");
  if (u.size() < 2) throw ContractViolation("pearson_correlation: need at least two points");
  const Scalar r = detail::standardized(u).dot(detail::standardized(v));
  return std::clamp(r, Scalar(-1), Scalar(1));
}

}  // namespace gstep
