#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "gstep/linalg.hpp"

namespace gstep {

using Node = Index;
using Edge = std::pair<Node, Node>;

/// Undirected simple graph on nodes 0..p-1. Pairs are stored as (i, l), i < l.
class EdgeSet {
 public:
  explicit EdgeSet(Index p = 0) : p_(p) {}

  Index p() const { return p_; }
  std::size_t size() const { return edges_.size(); }
  bool empty() const { return edges_.empty(); }

  void insert(Node i, Node l);
  void erase(Node i, Node l);
  bool contains(Node i, Node l) const;

  const std::set<Edge>& pairs() const { return edges_; }
  auto begin() const { return edges_.begin(); }
  auto end() const { return edges_.end(); }

  /// Number of unordered off-diagonal pairs, C(p, 2).
  std::uint64_t pair_count() const {
    return static_cast<std::uint64_t>(p_) * static_cast<std::uint64_t>(p_ - 1) / 2;
  }

  friend bool operator==(const EdgeSet&, const EdgeSet&) = default;

 private:
  Edge canonical(Node i, Node l) const;

  Index p_;
  std::set<Edge> edges_;
};

/// Ground truth for a synthetic Gaussian graphical model.
struct PrecisionModel {
  Index p = 0;
  Matrix sigma;
  Matrix omega;
  EdgeSet edges;
  std::string label;
  std::uint64_t seed = 0;
};

/// n draws from a model, one observation per row.
struct SampleSet {
  Matrix data;
  std::uint64_t seed = 0;
  std::string model_label;

  Index n() const { return data.rows(); }
  Index p() const { return data.cols(); }
};

/// Off-diagonal pairs with |ω_il| > tol.
EdgeSet support_of(const Matrix& omega, double tol = 1e-10);

/// Validates Ω (symmetric PD), derives Σ = Ω⁻¹ and the edge set.
PrecisionModel make_precision_model(Matrix omega, std::string label, std::uint64_t seed = 0);

/// AR(1): σ_ij = ρ^|i−j|, tridiagonal precision.
PrecisionModel gen_ar1(Index p, double rho = 0.4);

/// Geometric two-nearest-neighbour graph on uniform points in the unit
/// square, signed uniform weights in ±[0.5, 1], repaired to λ_min ≥ 0.1 by
/// diagonal inflation and rescaled to unit diagonal.
PrecisionModel gen_nn2(Index p, std::uint64_t seed);

/// Block-diagonal precision: blocks of size block_size with unit diagonal
/// and 0.5 off-diagonal.
PrecisionModel gen_bg(Index p, Index block_size = 5);

/// Rows are z Lᵀ with L the Cholesky factor of Σ and z standard normal.
SampleSet sample_mvn(const PrecisionModel& model, Index n, std::uint64_t seed);

/// Column-centered copy of the data.
Matrix centered(const Matrix& data);

}  // namespace gstep
