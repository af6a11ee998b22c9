#pragma once

// Graphical stepwise selection: greedy forward edge addition driven by the
// correlation of nodewise regression residuals, interleaved with single
// backward removals, followed by assembly of a sparse precision estimate.

#include <cstddef>
#include <optional>
#include <vector>

#include "gstep/graph_model.hpp"

namespace gstep {

/// Forward (add) and backward (remove) thresholds, 0 ≤ backward < forward ≤ 1.
class Thresholds {
 public:
  Thresholds(double forward, double backward);

  double forward() const { return forward_; }
  double backward() const { return backward_; }

  friend bool operator==(const Thresholds&, const Thresholds&) = default;

 private:
  double forward_;
  double backward_;
};

/// Symmetric family of neighbour sets, each kept sorted.
class NeighborhoodSystem {
 public:
  explicit NeighborhoodSystem(Index p = 0) : sets_(static_cast<std::size_t>(p)) {}
  static NeighborhoodSystem from_edges(const EdgeSet& edges);

  Index p() const { return static_cast<Index>(sets_.size()); }
  const std::vector<Node>& neighbors(Node j) const { return sets_.at(static_cast<std::size_t>(j)); }
  Index degree(Node j) const { return static_cast<Index>(neighbors(j).size()); }
  bool contains(Node j, Node l) const;

  void add_edge(Node j, Node l);
  void remove_edge(Node j, Node l);

  std::size_t edge_count() const;
  EdgeSet edges() const;

  friend bool operator==(const NeighborhoodSystem&, const NeighborhoodSystem&) = default;

 private:
  void check(Node j, Node l) const;

  std::vector<std::vector<Node>> sets_;
};

/// A residual correlation attached to the pair (j, l), j < l.
struct CandidateScore {
  Node j = 0;
  Node l = 0;
  double value = 0.0;
};

enum class StepKind { add, remove };

struct TraceStep {
  StepKind kind;
  Node j;
  Node l;
  double score;
};

struct GsaOptions {
  /// Maximum neighbourhood size; defaults to min(n − 2, p − 1).
  std::optional<Index> cap;
  /// Defaults to max(100, 4 p²).
  std::optional<std::size_t> max_iter;
};

/// Neighbourhoods reached by the stepwise search plus its trace.
struct GsaPath {
  NeighborhoodSystem neighborhoods;
  std::size_t iterations = 0;
  std::vector<TraceStep> trace;
};

struct GsaFit {
  NeighborhoodSystem neighborhoods;
  EdgeSet edges;
  Matrix omega_hat;
  Thresholds thresholds{1.0, 0.0};
  std::size_t iterations = 0;
  std::vector<TraceStep> trace;
};

Index default_cap(Index n, Index p);

/// Residual of column j regressed on the columns in its neighbourhood,
/// optionally with one neighbour left out. Empty predictor sets yield the
/// centered column.
Vector residual_for_node(const Matrix& data, Node j, const NeighborhoodSystem& neighborhoods,
                         std::optional<Node> exclude = std::nullopt);

/// Largest |corr(e_j, e_l)| over non-adjacent pairs whose nodes are below the
/// cap, ties resolved to the lexicographically smallest (j, l).
std::optional<CandidateScore> forward_scan(const Matrix& data,
                                           const NeighborhoodSystem& neighborhoods, Index cap);

/// Smallest |corr(r_j, r_l)| over current edges, where r_j leaves l out of
/// j's regression and vice versa.
std::optional<CandidateScore> backward_scan(const Matrix& data,
                                            const NeighborhoodSystem& neighborhoods);

/// Runs the stepwise search on column-centered data without assembling Ω̂.
GsaPath select_neighborhoods(const Matrix& data, const Thresholds& thresholds,
                             const GsaOptions& options = {});

/// Full fit: column-centers the data, runs the search, assembles Ω̂.
GsaFit run_gsa(const Matrix& data, const Thresholds& thresholds, const GsaOptions& options = {});

/// ω̂_ii = n / e_iᵀe_i and, for neighbours, ω̂_il = n e_iᵀe_l / (e_iᵀe_i · e_lᵀe_l).
Matrix assemble_omega(const Matrix& data, const NeighborhoodSystem& neighborhoods);

/// Population partial correlation −ω_il / √(ω_ii ω_ll).
double partial_corr_oracle(const Matrix& omega, Node i, Node l);

}  // namespace gstep
