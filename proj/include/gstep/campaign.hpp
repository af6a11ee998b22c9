#pragma once

// Monte Carlo campaigns over synthetic models and the repeated-split LDA
// workflow, with their CSV/JSON reports.

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gstep/classify.hpp"
#include "gstep/io.hpp"
#include "gstep/metrics.hpp"

namespace gstep {

struct ModelSpec {
  std::string label;  // ar1, nn2 or bg
  Index p = 0;
  double rho = 0.4;
  Index block_size = 5;
};

struct CampaignSpec {
  std::vector<ModelSpec> models;
  Index n = 100;
  Index replicates = 1;
  Index folds = 5;
  CvGrid grid = CvGrid::standard();
  std::uint64_t seed = 1;
  unsigned threads = 1;
  /// Directory holding <method>/<model>_p<p>_r<rep>.csv precision estimates.
  std::optional<std::filesystem::path> import_estimates;
  /// Also write each replicate's sample to samples/<model>_p<p>_r<rep>.csv.
  bool write_samples = false;
};

/// Parses a campaign file. Relative grid paths resolve against base_dir.
CampaignSpec campaign_from_json(const io::Json& json, const std::filesystem::path& base_dir = {});

/// Ground-truth model for a model entry. Only nn2 depends on the seed.
PrecisionModel build_model(const ModelSpec& spec, std::uint64_t seed);

std::string replicate_tag(const ModelSpec& spec, Index replicate);

struct CampaignResult {
  std::vector<ReplicateRecord> records;
  std::vector<std::string> failures;
  /// Keyed by (model label, p); GS estimates only.
  std::map<std::pair<std::string, Index>, Eigen::MatrixXi> zero_frequency;
};

CampaignResult run_campaign(const CampaignSpec& spec,
                            const std::filesystem::path& sample_dir = {});

/// replicates.csv (deterministic), timings.csv, summary.json and one
/// zero_freq_<model>_p<p>.csv per model.
void write_campaign(const CampaignResult& result, const std::filesystem::path& out_dir);

std::string format_replicates_csv(const std::vector<ReplicateRecord>& records);
io::Json summary_to_json(const std::vector<SummaryRow>& rows);

struct LdaCampaign {
  std::vector<LdaRepetition> repetitions;
  std::vector<std::string> failures;
};

/// Repetitions use seeds split_seed(seed, r).
LdaCampaign run_lda_campaign(const LabeledDataset& dataset, const LdaWorkflow& workflow,
                             Index repetitions, std::uint64_t seed, unsigned threads);

std::string format_lda_csv(const LdaCampaign& campaign);
/// Sensitivity / Specificity / MCC / Number of Edges as {mean, sd}.
io::Json lda_summary_json(const LdaCampaign& campaign);

}  // namespace gstep
