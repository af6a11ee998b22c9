#include "gstep/graph_model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "gstep/random.hpp"

namespace gstep {

Edge EdgeSet::canonical(Node i, Node l) const {
  if (i == l) throw ContractViolation("EdgeSet: self-loop on node " + std::to_string(i));
  if (i < 0 || l < 0 || i >= p_ || l >= p_) {
    throw ContractViolation("EdgeSet: node index out of range for p = " + std::to_string(p_));
  }
  return i < l ? Edge{i, l} : Edge{l, i};
}

void EdgeSet::insert(Node i, Node l) { edges_.insert(canonical(i, l)); }

void EdgeSet::erase(Node i, Node l) { edges_.erase(canonical(i, l)); }

bool EdgeSet::contains(Node i, Node l) const {
  if (i == l) return false;
  return edges_.count(canonical(i, l)) > 0;
}

EdgeSet support_of(const Matrix& omega, double tol) {
  if (omega.rows() != omega.cols()) throw ContractViolation("support_of: matrix must be square");
  EdgeSet edges(omega.rows());
  for (Index i = 0; i < omega.rows(); ++i) {
    for (Index l = i + 1; l < omega.cols(); ++l) {
      if (std::abs(omega(i, l)) > tol) edges.insert(i, l);
    }
  }
  return edges;
}

PrecisionModel make_precision_model(Matrix omega, std::string label, std::uint64_t seed) {
  PrecisionModel model;
  model.p = omega.rows();
  model.sigma = invert_pd(omega);
  model.edges = support_of(omega);
  model.omega = std::move(omega);
  model.label = std::move(label);
  model.seed = seed;
  return model;
}

PrecisionModel gen_ar1(Index p, double rho) {
  if (p < 2) throw ContractViolation("gen_ar1: need p >= 2");
  if (!(rho > -1.0 && rho < 1.0)) throw ContractViolation("gen_ar1: rho must lie in (-1, 1)");
  Matrix sigma(p, p);
  for (Index i = 0; i < p; ++i) {
    for (Index j = 0; j < p; ++j) sigma(i, j) = std::pow(rho, static_cast<double>(std::abs(i - j)));
  }
  Matrix omega = invert_pd(sigma);
  // Entries off the band are zero up to rounding.
  for (Index i = 0; i < p; ++i) {
    for (Index j = 0; j < p; ++j) {
      if (std::abs(i - j) > 1) omega(i, j) = 0.0;
    }
  }
  PrecisionModel model;
  model.p = p;
  model.sigma = std::move(sigma);
  model.edges = support_of(omega);
  model.omega = std::move(omega);
  model.label = "ar1";
  return model;
}

PrecisionModel gen_nn2(Index p, std::uint64_t seed) {
  if (p < 4) throw ContractViolation("gen_nn2: need p >= 4");
  Rng rng(seed);
  std::vector<std::pair<double, double>> points(static_cast<std::size_t>(p));
  for (auto& pt : points) {
    pt.first = rng.uniform();
    pt.second = rng.uniform();
  }

  EdgeSet edges(p);
  std::vector<Node> order(static_cast<std::size_t>(p));
  for (Node i = 0; i < p; ++i) {
    const auto [xi, yi] = points[static_cast<std::size_t>(i)];
    auto dist2 = [&](Node k) {
      const auto [xk, yk] = points[static_cast<std::size_t>(k)];
      return (xi - xk) * (xi - xk) + (yi - yk) * (yi - yk);
    };
    std::iota(order.begin(), order.end(), Node{0});
    std::erase(order, i);
    std::partial_sort(order.begin(), order.begin() + 2, order.end(), [&](Node a, Node b) {
      const double da = dist2(a), db = dist2(b);
      return da < db || (da == db && a < b);
    });
    edges.insert(i, order[0]);
    edges.insert(i, order[1]);
  }

  Matrix omega = Matrix::Identity(p, p);
  for (const auto& [i, l] : edges) {
    const double sign = rng.uniform() < 0.5 ? -1.0 : 1.0;
    const double w = sign * rng.uniform(0.5, 1.0);
    omega(i, l) = w;
    omega(l, i) = w;
  }

  Eigen::SelfAdjointEigenSolver<Matrix> eig(omega, Eigen::EigenvaluesOnly);
  const double lambda_min = eig.eigenvalues().minCoeff();
  if (lambda_min < 0.1) omega.diagonal().array() += 0.1 - lambda_min;
  const Vector scale = omega.diagonal().cwiseSqrt().cwiseInverse();
  omega = scale.asDiagonal() * omega * scale.asDiagonal();
  omega.diagonal().setOnes();

  auto model = make_precision_model(std::move(omega), "nn2", seed);
  return model;
}

PrecisionModel gen_bg(Index p, Index block_size) {
  if (block_size < 1) throw ContractViolation("gen_bg: block size must be positive");
  if (p < 1 || p % block_size != 0) {
    throw ContractViolation("gen_bg: p = " + std::to_string(p) + " is not divisible by block size " +
                            std::to_string(block_size));
  }
  Matrix omega = Matrix::Zero(p, p);
  for (Index start = 0; start < p; start += block_size) {
    omega.block(start, start, block_size, block_size).setConstant(0.5);
  }
  omega.diagonal().setOnes();
  return make_precision_model(std::move(omega), "bg");
}

SampleSet sample_mvn(const PrecisionModel& model, Index n, std::uint64_t seed) {
  if (n < 1) throw ContractViolation("sample_mvn: need n >= 1");
  const auto factor = cholesky(model.sigma);
  const Index p = model.sigma.rows();
  Rng rng(seed);
  Matrix z(n, p);
  for (Index r = 0; r < n; ++r) {
    for (Index c = 0; c < p; ++c) z(r, c) = rng.normal();
  }
  SampleSet out;
  out.data = z * factor.lower().transpose();
  out.seed = seed;
  out.model_label = model.label;
  return out;
}

Matrix centered(const Matrix& data) {
  return data.rowwise() - data.colwise().mean();
}

}  // namespace gstep
