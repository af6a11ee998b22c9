#pragma once

// File formats: headerless-or-headed numeric CSV, labeled CSV, threshold
// grid CSV, and canonical JSON for models, fits and CV results.

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

#include "gstep/classify.hpp"
#include "gstep/gsa.hpp"
#include "gstep/threshold_cv.hpp"

namespace gstep::io {

using Json = nlohmann::json;

struct CsvTable {
  Matrix values;
  std::vector<std::string> header;
};

/// Comma separated, '.' decimal. A first line containing any non-numeric
/// field is taken as the header.
CsvTable parse_csv(const std::string& text);
CsvTable read_csv(const std::filesystem::path& path);

std::string format_number(double value);
std::string format_csv(const Matrix& values, const std::vector<std::string>& header = {});
void write_csv(const std::filesystem::path& path, const Matrix& values,
               const std::vector<std::string>& header = {});
void write_csv(const std::filesystem::path& path, const Eigen::MatrixXi& values);

/// Labeled rows: the named column holds group tags 1/2, all other columns
/// are features. Requires a header row.
LabeledDataset read_labeled_csv(const std::filesystem::path& path,
                                const std::string& label_column = "label");
void write_labeled_csv(const std::filesystem::path& path, const LabeledDataset& dataset,
                       const std::string& label_column = "label");

/// Two columns (forward, backward), optional header.
CvGrid read_grid_csv(const std::filesystem::path& path);

/// Sorted keys, two-space indent, doubles at 17 significant digits.
std::string dump_canonical(const Json& value);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);

Json model_to_json(const PrecisionModel& model);
PrecisionModel model_from_json(const Json& json);

Json fit_to_json(const GsaFit& fit, bool include_trace);
GsaFit fit_from_json(const Json& json);

/// One "i<TAB>l" line per estimated edge under an "i\tl" header.
std::string format_edge_tsv(const EdgeSet& edges);

Json cv_to_json(const CvResult& result);

}  // namespace gstep::io
