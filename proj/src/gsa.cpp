#include "gstep/gsa.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_set>

namespace gstep {

Thresholds::Thresholds(double forward, double backward) : forward_(forward), backward_(backward) {
  if (!(forward >= 0.0 && forward <= 1.0 && backward >= 0.0 && backward <= 1.0)) {
    throw ContractViolation("thresholds must lie in [0, 1]");
  }
  if (!(backward < forward)) {
    throw ContractViolation("backward threshold " + std::to_string(backward) +
                            " must be strictly below forward threshold " + std::to_string(forward));
  }
}

NeighborhoodSystem NeighborhoodSystem::from_edges(const EdgeSet& edges) {
  NeighborhoodSystem out(edges.p());
  for (const auto& [i, l] : edges) out.add_edge(i, l);
  return out;
}

void NeighborhoodSystem::check(Node j, Node l) const {
  if (j == l || j < 0 || l < 0 || j >= p() || l >= p()) {
    throw ContractViolation("invalid neighbour pair (" + std::to_string(j) + ", " +
                            std::to_string(l) + ")");
  }
}

bool NeighborhoodSystem::contains(Node j, Node l) const {
  const auto& set = neighbors(j);
  return std::binary_search(set.begin(), set.end(), l);
}

void NeighborhoodSystem::add_edge(Node j, Node l) {
  check(j, l);
  auto insert_sorted = [](std::vector<Node>& v, Node x) {
    auto it = std::lower_bound(v.begin(), v.end(), x);
    if (it == v.end() || *it != x) v.insert(it, x);
  };
  insert_sorted(sets_[static_cast<std::size_t>(j)], l);
  insert_sorted(sets_[static_cast<std::size_t>(l)], j);
}

void NeighborhoodSystem::remove_edge(Node j, Node l) {
  check(j, l);
  std::erase(sets_[static_cast<std::size_t>(j)], l);
  std::erase(sets_[static_cast<std::size_t>(l)], j);
}

std::size_t NeighborhoodSystem::edge_count() const {
  std::size_t total = 0;
  for (const auto& s : sets_) total += s.size();
  return total / 2;
}

EdgeSet NeighborhoodSystem::edges() const {
  EdgeSet out(p());
  for (Node j = 0; j < p(); ++j) {
    for (Node l : neighbors(j)) {
      if (j < l) out.insert(j, l);
    }
  }
  return out;
}

Index default_cap(Index n, Index p) { return std::max<Index>(0, std::min(n - 2, p - 1)); }

namespace {

std::vector<Node> without(const std::vector<Node>& set, std::optional<Node> drop) {
  std::vector<Node> out;
  out.reserve(set.size());
  for (Node k : set) {
    if (!drop || k != *drop) out.push_back(k);
  }
  return out;
}

Vector snap_exact_fit(Vector r, double reference_norm) {
  if (r.norm() <= 1e-10 * reference_norm) r.setZero();
  return r;
}

std::string trace_tail(const std::vector<TraceStep>& trace) {
  std::string out = "; last steps:";
  const std::size_t start = trace.size() > 6 ? trace.size() - 6 : 0;
  for (std::size_t k = start; k < trace.size(); ++k) {
    const auto& s = trace[k];
    out += std::string(" ") + (s.kind == StepKind::add ? "+" : "-") + "(" + std::to_string(s.j) +
           "," + std::to_string(s.l) + ")@" + std::to_string(s.score);
  }
  return out;
}

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Residual bookkeeping for one stepwise run. Residuals depend only on
// (j, Â_j), so a change to the edge (j, l) refreshes nodes j and l only.
// Regressions go through the cross-product matrix XᵀX; the leave-one-out
// residuals needed by the backward step come from the inverse of the
// neighbourhood Gram block without refitting.
class StepwiseState {
 public:
  StepwiseState(const Matrix& x, NeighborhoodSystem neighborhoods)
      : x_(x),
        gram_(x.transpose() * x),
        nbrs_(std::move(neighborhoods)),
        unit_(x.rows(), x.cols()),
        loo_(static_cast<std::size_t>(x.cols())) {
    if (nbrs_.p() != x.cols()) {
      throw ContractViolation("neighbourhood system has p = " + std::to_string(nbrs_.p()) +
                              " but data has " + std::to_string(x.cols()) + " columns");
    }
    for (Node j = 0; j < x.cols(); ++j) compute_residuals(j);
    corr_ = unit_.transpose() * unit_;
  }

  const NeighborhoodSystem& neighborhoods() const { return nbrs_; }

  std::optional<CandidateScore> best_forward(Index cap) const {
    std::optional<CandidateScore> best;
    const Index p = x_.cols();
    for (Node j = 0; j < p; ++j) {
      if (nbrs_.degree(j) >= cap) continue;
      for (Node l = j + 1; l < p; ++l) {
        if (nbrs_.degree(l) >= cap || nbrs_.contains(j, l)) continue;
        const double f = std::clamp(corr_(j, l), -1.0, 1.0);
        if (!best || std::abs(f) > std::abs(best->value)) best = CandidateScore{j, l, f};
      }
    }
    return best;
  }

  std::optional<CandidateScore> worst_backward() const {
    std::optional<CandidateScore> worst;
    for (Node j = 0; j < x_.cols(); ++j) {
      const auto& nj = nbrs_.neighbors(j);
      for (std::size_t k = 0; k < nj.size(); ++k) {
        const Node l = nj[k];
        if (l < j) continue;
        const auto& nl = nbrs_.neighbors(l);
        const auto pos = static_cast<std::size_t>(
            std::lower_bound(nl.begin(), nl.end(), j) - nl.begin());
        const double b = std::clamp(
            loo_[static_cast<std::size_t>(j)][k].dot(loo_[static_cast<std::size_t>(l)][pos]), -1.0,
            1.0);
        if (!worst || std::abs(b) < std::abs(worst->value)) worst = CandidateScore{j, l, b};
      }
    }
    return worst;
  }

  void add(Node j, Node l) {
    nbrs_.add_edge(j, l);
    refresh(j);
    refresh(l);
  }

  void remove(Node j, Node l) {
    nbrs_.remove_edge(j, l);
    refresh(j);
    refresh(l);
  }

 private:
  void refresh(Node j) {
    compute_residuals(j);
    Vector column = unit_.transpose() * unit_.col(j);
    corr_.col(j) = column;
    corr_.row(j) = column.transpose();
  }

  void compute_residuals(Node j) {
    const auto& set = nbrs_.neighbors(j);
    auto& loo = loo_[static_cast<std::size_t>(j)];
    loo.assign(set.size(), Vector());
    const Vector y = x_.col(j);
    if (set.empty()) {
      unit_.col(j) = detail::standardized(y);
      return;
    }
    const double y_norm = y.norm();
    const Eigen::LLT<Matrix> llt(gram_(set, set));
    if (llt.info() == Eigen::Success && llt.rcond() > 1e-10) {
      const auto q = static_cast<Index>(set.size());
      const Matrix inv = llt.solve(Matrix::Identity(q, q));
      const Vector beta = inv * gram_(set, j);
      const Matrix predictors = x_(Eigen::all, set);
      const Vector e = y - predictors * beta;
      unit_.col(j) = detail::standardized(snap_exact_fit(e, y_norm));
      const Matrix w = predictors * inv;
      for (Index k = 0; k < q; ++k) {
        Vector r = e + (beta(k) / inv(k, k)) * w.col(k);
        loo[static_cast<std::size_t>(k)] = detail::standardized(snap_exact_fit(std::move(r), y_norm));
      }
      return;
    }
    // Collinear neighbourhood: fall back to minimum-norm refits.
    unit_.col(j) = detail::standardized(least_squares_residuals(y, x_(Eigen::all, set)));
    for (std::size_t k = 0; k < set.size(); ++k) {
      const auto reduced = without(set, set[k]);
      loo[k] = detail::standardized(least_squares_residuals(y, x_(Eigen::all, reduced)));
    }
  }

  const Matrix& x_;
  Matrix gram_;
  NeighborhoodSystem nbrs_;
  Matrix unit_;
  Matrix corr_;
  std::vector<std::vector<Vector>> loo_;
};

}  // namespace

Vector residual_for_node(const Matrix& data, Node j, const NeighborhoodSystem& neighborhoods,
                         std::optional<Node> exclude) {
  if (j < 0 || j >= data.cols()) throw ContractViolation("residual_for_node: invalid node");
  const auto predictors = without(neighborhoods.neighbors(j), exclude);
  return least_squares_residuals(data.col(j), data(Eigen::all, predictors));
}

std::optional<CandidateScore> forward_scan(const Matrix& data,
                                           const NeighborhoodSystem& neighborhoods, Index cap) {
  return StepwiseState(data, neighborhoods).best_forward(cap);
}

std::optional<CandidateScore> backward_scan(const Matrix& data,
                                            const NeighborhoodSystem& neighborhoods) {
  return StepwiseState(data, neighborhoods).worst_backward();
}

GsaPath select_neighborhoods(const Matrix& data, const Thresholds& thresholds,
                             const GsaOptions& options) {
  const Index n = data.rows();
  const Index p = data.cols();
  if (n < 3) throw ContractViolation("stepwise search needs at least 3 observations");
  const Index cap = options.cap.value_or(default_cap(n, p));
  const std::size_t max_iter = options.max_iter.value_or(
      std::max<std::size_t>(100, 4 * static_cast<std::size_t>(p) * static_cast<std::size_t>(p)));

  const Matrix x = centered(data);
  StepwiseState state(x, NeighborhoodSystem(p));
  GsaPath path;

  auto edge_key = [p](Node j, Node l) {
    return mix64(static_cast<std::uint64_t>(j) * static_cast<std::uint64_t>(p) +
                 static_cast<std::uint64_t>(l));
  };
  std::uint64_t state_hash = 0;
  std::unordered_set<std::uint64_t> seen{state_hash};

  while (true) {
    const auto add = state.best_forward(cap);
    if (!add || std::abs(add->value) < thresholds.forward()) break;
    if (path.iterations == max_iter) throw IterationLimit(max_iter, trace_tail(path.trace));

    state.add(add->j, add->l);
    state_hash ^= edge_key(add->j, add->l);
    path.trace.push_back({StepKind::add, add->j, add->l, add->value});
    ++path.iterations;

    const auto drop = state.worst_backward();
    if (drop && std::abs(drop->value) <= thresholds.backward()) {
      state.remove(drop->j, drop->l);
      state_hash ^= edge_key(drop->j, drop->l);
      path.trace.push_back({StepKind::remove, drop->j, drop->l, drop->value});
    }
    if (!seen.insert(state_hash).second) throw CycleDetected(path.iterations, trace_tail(path.trace));
  }
  path.neighborhoods = state.neighborhoods();
  return path;
}

GsaFit run_gsa(const Matrix& data, const Thresholds& thresholds, const GsaOptions& options) {
  auto path = select_neighborhoods(data, thresholds, options);
  GsaFit fit;
  fit.omega_hat = assemble_omega(centered(data), path.neighborhoods);
  fit.edges = path.neighborhoods.edges();
  fit.neighborhoods = std::move(path.neighborhoods);
  fit.thresholds = thresholds;
  fit.iterations = path.iterations;
  fit.trace = std::move(path.trace);
  return fit;
}

Matrix assemble_omega(const Matrix& data, const NeighborhoodSystem& neighborhoods) {
  const Index p = data.cols();
  if (neighborhoods.p() != p) throw ContractViolation("assemble_omega: dimension mismatch");
  const auto n = static_cast<double>(data.rows());
  Matrix residuals(data.rows(), p);
  Vector energy(p);
  for (Node i = 0; i < p; ++i) {
    residuals.col(i) = residual_for_node(data, i, neighborhoods);
    energy(i) = residuals.col(i).squaredNorm();
    if (energy(i) <= 1e-12) throw DegenerateResidual(i);
  }
  Matrix omega = Matrix::Zero(p, p);
  for (Node i = 0; i < p; ++i) {
    omega(i, i) = n / energy(i);
    for (Node l : neighborhoods.neighbors(i)) {
      if (l <= i) continue;
      const double value = n * residuals.col(i).dot(residuals.col(l)) / (energy(i) * energy(l));
      omega(i, l) = value;
      omega(l, i) = value;
    }
  }
  return omega;
}

double partial_corr_oracle(const Matrix& omega, Node i, Node l) {
  return -omega(i, l) / std::sqrt(omega(i, i) * omega(l, l));
}

}  // namespace gstep
