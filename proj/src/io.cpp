#include "gstep/io.hpp"

#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "gstep/random.hpp"

namespace gstep::io {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) {
    const auto first = field.find_first_not_of(" \t\r");
    const auto last = field.find_last_not_of(" \t\r");
    fields.push_back(first == std::string::npos ? "" : field.substr(first, last - first + 1));
  }
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

bool parse_double(const std::string& field, double& out) {
  if (field.empty()) return false;
  const char* begin = field.data();
  const char* end = begin + field.size();
  if (*begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc() && ptr == end && std::isfinite(out);
}

bool is_blank(const std::string& line) {
  return line.find_first_not_of(" \t\r") == std::string::npos;
}

Json triplets(const Matrix& m) {
  Json out = Json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index l = i; l < m.cols(); ++l) {
      if (m(i, l) != 0.0) out.push_back(Json::array({i, l, m(i, l)}));
    }
  }
  return out;
}

Matrix from_triplets(const Json& json, Index p) {
  Matrix m = Matrix::Zero(p, p);
  for (const auto& t : json) {
    if (!t.is_array() || t.size() != 3) throw DataError("omega triplet must be [i, l, value]");
    const auto i = t[0].get<Index>();
    const auto l = t[1].get<Index>();
    if (i < 0 || l < 0 || i >= p || l >= p) throw DataError("omega triplet index out of range");
    m(i, l) = t[2].get<double>();
    m(l, i) = m(i, l);
  }
  return m;
}

void dump_into(const Json& v, std::string& out, int depth) {
  const std::string pad(static_cast<std::size_t>(2 * (depth + 1)), ' ');
  const std::string close_pad(static_cast<std::size_t>(2 * depth), ' ');
  switch (v.type()) {
    case Json::value_t::object: {
      if (v.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (const auto& [key, item] : v.items()) {
        if (!first) out += ",\n";
        first = false;
        out += pad + Json(key).dump() + ": ";
        dump_into(item, out, depth + 1);
      }
      out += "\n" + close_pad + "}";
      return;
    }
    case Json::value_t::array: {
      if (v.empty()) {
        out += "[]";
        return;
      }
      // Arrays of scalars stay on one line (triplets, edges, grid rows).
      const bool flat = std::all_of(v.begin(), v.end(), [](const Json& x) { return x.is_primitive(); });
      if (flat) {
        out += "[";
        for (std::size_t i = 0; i < v.size(); ++i) {
          if (i) out += ", ";
          dump_into(v[i], out, depth + 1);
        }
        out += "]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ",\n";
        out += pad;
        dump_into(v[i], out, depth + 1);
      }
      out += "\n" + close_pad + "]";
      return;
    }
    case Json::value_t::number_float: {
      const double d = v.get<double>();
      out += std::isfinite(d) ? format_number(d) : "null";
      return;
    }
    default:
      out += v.dump();
  }
}

}  // namespace

std::string format_number(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

CsvTable parse_csv(const std::string& text) {
  CsvTable table;
  std::vector<std::vector<double>> rows;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  std::size_t width = 0;
  bool first_content = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_blank(line)) continue;
    const auto fields = split_fields(line);
    std::vector<double> row(fields.size());
    bool numeric = true;
    for (std::size_t k = 0; k < fields.size(); ++k) numeric = numeric && parse_double(fields[k], row[k]);
    if (first_content) {
      first_content = false;
      width = fields.size();
      if (!numeric) {
        table.header = fields;
        continue;
      }
    }
    if (fields.size() != width) {
      throw DataError("expected " + std::to_string(width) + " fields, found " +
                          std::to_string(fields.size()),
                      line_no);
    }
    if (!numeric) throw DataError("non-numeric or non-finite field", line_no);
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw DataError("no data rows");
  table.values.resize(static_cast<Index>(rows.size()), static_cast<Index>(width));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < width; ++c) {
      table.values(static_cast<Index>(r), static_cast<Index>(c)) = rows[r][c];
    }
  }
  return table;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out << text;
  if (!out) throw DataError("write failed for " + path.string());
}

CsvTable read_csv(const std::filesystem::path& path) {
  try {
    return parse_csv(read_text(path));
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

std::string format_csv(const Matrix& values, const std::vector<std::string>& header) {
  std::string out;
  if (!header.empty()) {
    for (std::size_t k = 0; k < header.size(); ++k) out += (k ? "," : "") + header[k];
    out += "\n";
  }
  for (Index r = 0; r < values.rows(); ++r) {
    for (Index c = 0; c < values.cols(); ++c) {
      if (c) out += ",";
      out += format_number(values(r, c));
    }
    out += "\n";
  }
  return out;
}

void write_csv(const std::filesystem::path& path, const Matrix& values,
               const std::vector<std::string>& header) {
  write_text(path, format_csv(values, header));
}

void write_csv(const std::filesystem::path& path, const Eigen::MatrixXi& values) {
  std::string out;
  for (Index r = 0; r < values.rows(); ++r) {
    for (Index c = 0; c < values.cols(); ++c) {
      if (c) out += ",";
      out += std::to_string(values(r, c));
    }
    out += "\n";
  }
  write_text(path, out);
}

LabeledDataset read_labeled_csv(const std::filesystem::path& path, const std::string& label_column) {
  const auto table = read_csv(path);
  if (table.header.empty()) throw DataError(path.string() + ": labeled CSV needs a header row");
  const auto it = std::find(table.header.begin(), table.header.end(), label_column);
  if (it == table.header.end()) {
    throw DataError(path.string() + ": no label column '" + label_column + "'");
  }
  const auto label_idx = static_cast<Index>(it - table.header.begin());
  LabeledDataset out;
  std::vector<Index> features;
  for (Index c = 0; c < table.values.cols(); ++c) {
    if (c == label_idx) continue;
    features.push_back(c);
    out.feature_names.push_back(table.header[static_cast<std::size_t>(c)]);
  }
  out.data = table.values(Eigen::all, features);
  for (Index r = 0; r < table.values.rows(); ++r) {
    const double tag = table.values(r, label_idx);
    if (tag != 1.0 && tag != 2.0) {
      throw DataError(path.string() + ": label must be 1 or 2", static_cast<std::size_t>(r) + 2);
    }
    out.labels.push_back(static_cast<int>(tag));
  }
  return out;
}

void write_labeled_csv(const std::filesystem::path& path, const LabeledDataset& dataset,
                       const std::string& label_column) {
  std::vector<std::string> header{label_column};
  Matrix values(dataset.n(), dataset.p() + 1);
  for (Index j = 0; j < dataset.p(); ++j) {
    header.push_back(dataset.feature_names.empty() ? "x" + std::to_string(j + 1)
                                                   : dataset.feature_names[static_cast<std::size_t>(j)]);
  }
  for (Index r = 0; r < dataset.n(); ++r) values(r, 0) = dataset.labels[static_cast<std::size_t>(r)];
  values.rightCols(dataset.p()) = dataset.data;
  write_csv(path, values, header);
}

CvGrid read_grid_csv(const std::filesystem::path& path) {
  const auto table = read_csv(path);
  if (table.values.cols() != 2) throw DataError(path.string() + ": grid CSV needs two columns");
  CvGrid grid;
  for (Index r = 0; r < table.values.rows(); ++r) {
    try {
      grid.pairs.emplace_back(table.values(r, 0), table.values(r, 1));
    } catch (const ContractViolation& e) {
      throw DataError(path.string() + ": " + e.what(),
                      static_cast<std::size_t>(r) + (table.header.empty() ? 1 : 2));
    }
  }
  return grid;
}

std::string dump_canonical(const Json& value) {
  std::string out;
  dump_into(value, out, 0);
  out += "\n";
  return out;
}

Json model_to_json(const PrecisionModel& model) {
  return Json{{"p", model.p},
              {"label", model.label},
              {"seed", model.seed},
              {"generator", std::string(kGeneratorName)},
              {"omega", triplets(model.omega)}};
}

PrecisionModel model_from_json(const Json& json) {
  try {
    const auto p = json.at("p").get<Index>();
    if (p < 1) throw DataError("model p must be positive");
    auto omega = from_triplets(json.at("omega"), p);
    return make_precision_model(std::move(omega), json.value("label", std::string("custom")),
                                json.value("seed", std::uint64_t{0}));
  } catch (const Json::exception& e) {
    throw DataError(std::string("malformed model JSON: ") + e.what());
  }
}

Json fit_to_json(const GsaFit& fit, bool include_trace) {
  Json edges = Json::array();
  for (const auto& [i, l] : fit.edges) edges.push_back(Json::array({i, l}));
  Json out{{"p", fit.edges.p()},
           {"alpha_f", fit.thresholds.forward()},
           {"alpha_b", fit.thresholds.backward()},
           {"edges", std::move(edges)},
           {"omega", triplets(fit.omega_hat)},
           {"iterations", fit.iterations}};
  if (include_trace) {
    Json trace = Json::array();
    for (const auto& step : fit.trace) {
      trace.push_back(Json{{"kind", step.kind == StepKind::add ? "add" : "remove"},
                           {"j", step.j},
                           {"l", step.l},
                           {"score", step.score}});
    }
    out["trace"] = std::move(trace);
  }
  return out;
}

GsaFit fit_from_json(const Json& json) {
  try {
    const auto p = json.at("p").get<Index>();
    GsaFit fit;
    fit.thresholds = Thresholds(json.at("alpha_f").get<double>(), json.at("alpha_b").get<double>());
    fit.edges = EdgeSet(p);
    for (const auto& e : json.at("edges")) fit.edges.insert(e.at(0).get<Index>(), e.at(1).get<Index>());
    fit.neighborhoods = NeighborhoodSystem::from_edges(fit.edges);
    fit.omega_hat = from_triplets(json.at("omega"), p);
    fit.iterations = json.at("iterations").get<std::size_t>();
    if (json.contains("trace")) {
      for (const auto& s : json.at("trace")) {
        const auto kind = s.at("kind").get<std::string>();
        if (kind != "add" && kind != "remove") throw DataError("unknown trace step " + kind);
        fit.trace.push_back({kind == "add" ? StepKind::add : StepKind::remove, s.at("j").get<Index>(),
                             s.at("l").get<Index>(), s.at("score").get<double>()});
      }
    }
    return fit;
  } catch (const Json::exception& e) {
    throw DataError(std::string("malformed fit JSON: ") + e.what());
  } catch (const ContractViolation& e) {
    throw DataError(std::string("invalid fit JSON: ") + e.what());
  }
}

std::string format_edge_tsv(const EdgeSet& edges) {
  std::string out = "i\tl\n";
  for (const auto& [i, l] : edges) out += std::to_string(i) + "\t" + std::to_string(l) + "\n";
  return out;
}

Json cv_to_json(const CvResult& result) {
  Json scores = Json::array();
  for (const auto& [key, score] : result.scores) {
    scores.push_back(Json::array({key.first, key.second, score}));
  }
  Json failures = Json::array();
  for (const auto& f : result.failures) {
    failures.push_back(Json{{"alpha_f", f.thresholds.first},
                            {"alpha_b", f.thresholds.second},
                            {"reason", f.reason}});
  }
  return Json{{"best", {{"alpha_f", result.best.forward()},
                        {"alpha_b", result.best.backward()},
                        {"score", result.best_score}}},
              {"folds", result.fold_plan.folds},
              {"seed", result.fold_plan.seed},
              {"scores", std::move(scores)},
              {"failures", std::move(failures)}};
}

}  // namespace gstep::io
