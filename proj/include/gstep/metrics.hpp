#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "gstep/graph_model.hpp"

namespace gstep {

/// Recovery counts over unordered off-diagonal pairs.
struct ConfusionCounts {
  std::uint64_t tp = 0;
  std::uint64_t tn = 0;
  std::uint64_t fp = 0;
  std::uint64_t fn = 0;

  std::uint64_t total() const { return tp + tn + fp + fn; }
  friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

ConfusionCounts confusion(const EdgeSet& truth, const EdgeSet& estimate);

/// Matthews correlation; 0 when any marginal is empty.
double mcc(const ConfusionCounts& c);
/// TP / (TP + FN); 1 when there are no positives.
double sensitivity(const ConfusionCounts& c);
/// TN / (TN + FP); 1 when there are no negatives.
double specificity(const ConfusionCounts& c);

double frobenius_distance(const Matrix& omega_hat, const Matrix& omega);

struct KlDivergence {
  double divergence = 0.0;
  double normalized = 0.0;
  /// Ω̂ was not positive definite and had its spectrum floored at 1e-6.
  bool floored = false;
};

/// ½(tr Ω̂Ω⁻¹ − log det Ω̂Ω⁻¹ − p), with m_NKL = D/(1 + D).
KlDivergence kl_divergence(const Matrix& omega_hat, const Matrix& omega);
double normalized_kl(double divergence);

/// Entry (i, l) counts the estimates in which (i, l) is absent. Zero diagonal.
Eigen::MatrixXi zero_frequency_matrix(const std::vector<EdgeSet>& estimates, Index p);

struct ReplicateRecord {
  std::string model;
  Index p = 0;
  Index n = 0;
  Index replicate = 0;
  std::uint64_t seed = 0;
  std::string method;
  double alpha_f = 0.0;
  double alpha_b = 0.0;
  ConfusionCounts counts;
  double mcc = 0.0;
  double sensitivity = 0.0;
  double specificity = 0.0;
  double m_f = 0.0;
  double m_nkl = 0.0;
  bool kl_floored = false;
  double seconds = 0.0;
};

/// Fills counts and every derived metric of a record.
void score_record(ReplicateRecord& record, const EdgeSet& truth, const EdgeSet& estimate,
                  const Matrix& omega_hat, const Matrix& omega);

struct MetricSummary {
  double mean = 0.0;
  double sd = 0.0;
};

struct SummaryRow {
  std::string model;
  Index p = 0;
  std::string method;
  std::size_t replicates = 0;
  /// Fewer than two replicates: sd reported as 0.
  bool sd_degenerate = false;
  std::map<std::string, MetricSummary> metrics;
};

/// Mean and sample (R − 1) standard deviation per (model, p, method).
std::vector<SummaryRow> aggregate(const std::vector<ReplicateRecord>& records);

/// Mean and sample standard deviation of a non-empty list.
MetricSummary summarize(const std::vector<double>& values);

}  // namespace gstep
