#include "gstep/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>

namespace gstep {

ConfusionCounts confusion(const EdgeSet& truth, const EdgeSet& estimate) {
  if (truth.p() != estimate.p()) throw ContractViolation("confusion: node counts differ");
  ConfusionCounts c;
  for (const auto& [i, l] : estimate) {
    if (truth.contains(i, l)) {
      ++c.tp;
    } else {
      ++c.fp;
    }
  }
  c.fn = truth.size() - c.tp;
  c.tn = truth.pair_count() - c.tp - c.fp - c.fn;
  return c;
}

double mcc(const ConfusionCounts& c) {
  const auto tp = static_cast<double>(c.tp), tn = static_cast<double>(c.tn);
  const auto fp = static_cast<double>(c.fp), fn = static_cast<double>(c.fn);
  const double denom = (tp + fp) * (tp + fn) * (tn + fp) * (tn + fn);
  if (denom == 0.0) return 0.0;
  return std::clamp((tp * tn - fp * fn) / std::sqrt(denom), -1.0, 1.0);
}

double sensitivity(const ConfusionCounts& c) {
  if (c.tp + c.fn == 0) return 1.0;
  return static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
}

double specificity(const ConfusionCounts& c) {
  if (c.tn + c.fp == 0) return 1.0;
  return static_cast<double>(c.tn) / static_cast<double>(c.tn + c.fp);
}

double frobenius_distance(const Matrix& omega_hat, const Matrix& omega) {
  if (omega_hat.rows() != omega.rows() || omega_hat.cols() != omega.cols()) {
    throw ContractViolation("frobenius_distance: shape mismatch");
  }
  return (omega_hat - omega).norm();
}

double normalized_kl(double divergence) {
  const double d = std::max(0.0, divergence);
  return std::min(d / (1.0 + d), std::nextafter(1.0, 0.0));
}

KlDivergence kl_divergence(const Matrix& omega_hat, const Matrix& omega) {
  if (omega_hat.rows() != omega.rows() || omega_hat.cols() != omega.cols()) {
    throw ContractViolation("kl_divergence: shape mismatch");
  }
  const Index p = omega.rows();
  Matrix sigma;
  double log_det_omega = 0.0;
  try {
    sigma = invert_pd(omega);
    log_det_omega = log_det_pd(omega);
  } catch (const NotPositiveDefinite&) {
    throw ContractViolation("kl_divergence: reference precision matrix is not positive definite");
  }

  KlDivergence out;
  Matrix estimate = 0.5 * (omega_hat + omega_hat.transpose());
  double log_det_hat = 0.0;
  try {
    log_det_hat = log_det_pd(estimate);
  } catch (const NotPositiveDefinite&) {
    Eigen::SelfAdjointEigenSolver<Matrix> eig(estimate);
    const Vector floored = eig.eigenvalues().cwiseMax(1e-6);
    estimate = eig.eigenvectors() * floored.asDiagonal() * eig.eigenvectors().transpose();
    log_det_hat = floored.array().log().sum();
    out.floored = true;
  }
  const double trace = (estimate.cwiseProduct(sigma.transpose())).sum();
  const double d = 0.5 * (trace - (log_det_hat - log_det_omega) - static_cast<double>(p));
  out.divergence = d;
  out.normalized = normalized_kl(out.divergence);
  return out;
}

Eigen::MatrixXi zero_frequency_matrix(const std::vector<EdgeSet>& estimates, Index p) {
  const auto r = static_cast<int>(estimates.size());
  Eigen::MatrixXi counts = Eigen::MatrixXi::Constant(p, p, r);
  for (const auto& est : estimates) {
    if (est.p() != p) throw ContractViolation("zero_frequency_matrix: node counts differ");
    for (const auto& [i, l] : est) {
      --counts(i, l);
      --counts(l, i);
    }
  }
  counts.diagonal().setZero();
  return counts;
}

void score_record(ReplicateRecord& record, const EdgeSet& truth, const EdgeSet& estimate,
                  const Matrix& omega_hat, const Matrix& omega) {
  record.counts = confusion(truth, estimate);
  record.mcc = mcc(record.counts);
  record.sensitivity = sensitivity(record.counts);
  record.specificity = specificity(record.counts);
  record.m_f = frobenius_distance(omega_hat, omega);
  const auto kl = kl_divergence(omega_hat, omega);
  record.m_nkl = kl.normalized;
  record.kl_floored = kl.floored;
}

MetricSummary summarize(const std::vector<double>& values) {
  if (values.empty()) throw ContractViolation("summarize: no values");
  MetricSummary s;
  if (std::all_of(values.begin(), values.end(), [&](double v) { return v == values.front(); })) {
    s.mean = values.front();
    return s;
  }
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.sd = std::sqrt(ss / static_cast<double>(values.size() - 1));
  }
  return s;
}

std::vector<SummaryRow> aggregate(const std::vector<ReplicateRecord>& records) {
  if (records.empty()) throw ContractViolation("aggregate: no replicate records");
  using Key = std::tuple<std::string, Index, std::string>;
  std::map<Key, std::vector<const ReplicateRecord*>> groups;
  for (const auto& r : records) groups[{r.model, r.p, r.method}].push_back(&r);

  std::vector<SummaryRow> rows;
  for (const auto& [key, members] : groups) {
    SummaryRow row;
    std::tie(row.model, row.p, row.method) = key;
    row.replicates = members.size();
    row.sd_degenerate = members.size() < 2;
    auto column = [&](auto getter) {
      std::vector<double> v;
      for (const auto* m : members) v.push_back(getter(*m));
      return summarize(v);
    };
    row.metrics["mcc"] = column([](const ReplicateRecord& r) { return r.mcc; });
    row.metrics["sensitivity"] = column([](const ReplicateRecord& r) { return r.sensitivity; });
    row.metrics["specificity"] = column([](const ReplicateRecord& r) { return r.specificity; });
    row.metrics["m_f"] = column([](const ReplicateRecord& r) { return r.m_f; });
    row.metrics["m_nkl"] = column([](const ReplicateRecord& r) { return r.m_nkl; });
    row.metrics["edges"] = column(
        [](const ReplicateRecord& r) { return static_cast<double>(r.counts.tp + r.counts.fp); });
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace gstep
