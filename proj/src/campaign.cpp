#include "gstep/campaign.hpp"

#include <chrono>
#include <cmath>

#include "gstep/parallel.hpp"
#include "gstep/random.hpp"

namespace gstep {

namespace {

std::string number_or_na(double v) { return std::isfinite(v) ? io::format_number(v) : "NA"; }

CvGrid grid_from_json(const io::Json& json, const std::filesystem::path& base_dir) {
  if (json.is_string()) {
    const auto name = json.get<std::string>();
    if (name == "standard") return CvGrid::standard();
    std::filesystem::path path(name);
    if (path.is_relative() && !base_dir.empty()) path = base_dir / path;
    return io::read_grid_csv(path);
  }
  if (json.is_object()) {
    return CvGrid::cross(json.at("forward").get<std::vector<double>>(),
                         json.at("backward").get<std::vector<double>>());
  }
  if (json.is_array()) {
    CvGrid grid;
    for (const auto& pair : json) grid.pairs.emplace_back(pair.at(0).get<double>(), pair.at(1).get<double>());
    return grid;
  }
  throw DataError("grid must be \"standard\", a CSV path, {forward, backward} or a list of pairs");
}

}  // namespace

CampaignSpec campaign_from_json(const io::Json& json, const std::filesystem::path& base_dir) {
  try {
    CampaignSpec spec;
    for (const auto& m : json.at("models")) {
      ModelSpec model;
      model.label = m.at("label").get<std::string>();
      model.p = m.at("p").get<Index>();
      model.rho = m.value("rho", 0.4);
      model.block_size = m.value("block_size", Index{5});
      if (model.label != "ar1" && model.label != "nn2" && model.label != "bg") {
        throw DataError("unknown model label '" + model.label + "'");
      }
      spec.models.push_back(model);
    }
    spec.n = json.value("n", Index{100});
    spec.replicates = json.value("replicates", Index{1});
    spec.folds = json.value("folds", Index{5});
    spec.seed = json.value("seed", std::uint64_t{1});
    spec.threads = json.value("threads", 1u);
    if (json.contains("grid")) spec.grid = grid_from_json(json.at("grid"), base_dir);
    if (json.contains("import_estimates")) {
      std::filesystem::path dir(json.at("import_estimates").get<std::string>());
      spec.import_estimates = dir.is_relative() && !base_dir.empty() ? base_dir / dir : dir;
    }
    spec.write_samples = json.value("write_samples", false);
    if (spec.models.empty()) throw DataError("campaign lists no models");
    if (spec.replicates < 1) throw DataError("campaign needs at least one replicate");
    if (spec.n < 2 * spec.folds) throw DataError("campaign n must be at least 2 * folds");
    return spec;
  } catch (const io::Json::exception& e) {
    throw DataError(std::string("malformed campaign JSON: ") + e.what());
  } catch (const ContractViolation& e) {
    throw DataError(std::string("invalid campaign: ") + e.what());
  }
}

PrecisionModel build_model(const ModelSpec& spec, std::uint64_t seed) {
  if (spec.label == "ar1") return gen_ar1(spec.p, spec.rho);
  if (spec.label == "nn2") return gen_nn2(spec.p, seed);
  if (spec.label == "bg") return gen_bg(spec.p, spec.block_size);
  throw ContractViolation("unknown model label '" + spec.label + "'");
}

std::string replicate_tag(const ModelSpec& spec, Index replicate) {
  return spec.label + "_p" + std::to_string(spec.p) + "_r" + std::to_string(replicate);
}

CampaignResult run_campaign(const CampaignSpec& spec, const std::filesystem::path& sample_dir) {
  std::vector<PrecisionModel> truths;
  for (const auto& m : spec.models) truths.push_back(build_model(m, spec.seed));

  std::vector<std::string> methods;
  if (spec.import_estimates && std::filesystem::is_directory(*spec.import_estimates)) {
    for (const auto& entry : std::filesystem::directory_iterator(*spec.import_estimates)) {
      if (entry.is_directory()) methods.push_back(entry.path().filename().string());
    }
    std::sort(methods.begin(), methods.end());
  }

  struct TaskOutput {
    std::vector<ReplicateRecord> records;
    std::optional<EdgeSet> gs_edges;
    std::string failure;
  };
  const auto reps = static_cast<std::size_t>(spec.replicates);
  std::vector<TaskOutput> outputs(spec.models.size() * reps);

  parallel_for(outputs.size(), spec.threads, [&](std::size_t task) {
    const std::size_t m = task / reps;
    const auto r = static_cast<Index>(task % reps);
    const auto& model_spec = spec.models[m];
    const auto& truth = truths[m];
    auto& out = outputs[task];
    const std::uint64_t seed = split_seed(spec.seed, static_cast<std::uint64_t>(r));
    try {
      const auto start = std::chrono::steady_clock::now();
      const auto sample = sample_mvn(truth, spec.n, seed);
      if (spec.write_samples && !sample_dir.empty()) {
        io::write_csv(sample_dir / (replicate_tag(model_spec, r) + ".csv"), sample.data);
      }
      const auto cv = select_thresholds(sample.data, spec.folds, spec.grid, seed);
      const auto fit = run_gsa(sample.data, cv.best);

      ReplicateRecord rec;
      rec.model = model_spec.label;
      rec.p = model_spec.p;
      rec.n = spec.n;
      rec.replicate = r;
      rec.seed = seed;
      rec.method = "GS";
      rec.alpha_f = cv.best.forward();
      rec.alpha_b = cv.best.backward();
      score_record(rec, truth.edges, fit.edges, fit.omega_hat, truth.omega);
      rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      out.records.push_back(rec);
      out.gs_edges = fit.edges;

      for (const auto& method : methods) {
        const auto file = *spec.import_estimates / method / (replicate_tag(model_spec, r) + ".csv");
        if (!std::filesystem::exists(file)) continue;
        const Matrix raw = io::read_csv(file).values;
        if (raw.rows() != truth.p || raw.cols() != truth.p) {
          throw DataError(file.string() + ": expected a " + std::to_string(truth.p) + "x" +
                          std::to_string(truth.p) + " matrix");
        }
        const Matrix estimate = 0.5 * (raw + raw.transpose());
        ReplicateRecord imported = rec;
        imported.method = method;
        imported.alpha_f = std::nan("");
        imported.alpha_b = std::nan("");
        imported.seconds = 0.0;
        score_record(imported, truth.edges, support_of(estimate), estimate, truth.omega);
        out.records.push_back(imported);
      }
    } catch (const std::exception& e) {
      out.failure = replicate_tag(model_spec, r) + ": " + e.what();
    }
  });

  CampaignResult result;
  for (std::size_t m = 0; m < spec.models.size(); ++m) {
    std::vector<EdgeSet> estimates;
    for (std::size_t r = 0; r < reps; ++r) {
      auto& out = outputs[m * reps + r];
      for (auto& rec : out.records) result.records.push_back(std::move(rec));
      if (out.gs_edges) estimates.push_back(*out.gs_edges);
      if (!out.failure.empty()) result.failures.push_back(out.failure);
    }
    result.zero_frequency[{spec.models[m].label, spec.models[m].p}] =
        zero_frequency_matrix(estimates, spec.models[m].p);
  }
  return result;
}

std::string format_replicates_csv(const std::vector<ReplicateRecord>& records) {
  std::string out =
      "model,p,n,replicate,seed,method,alpha_f,alpha_b,tp,tn,fp,fn,mcc,sensitivity,specificity,"
      "m_f,m_nkl,kl_floored\n";
  for (const auto& r : records) {
    out += r.model + "," + std::to_string(r.p) + "," + std::to_string(r.n) + "," +
           std::to_string(r.replicate) + "," + std::to_string(r.seed) + "," + r.method + "," +
           number_or_na(r.alpha_f) + "," + number_or_na(r.alpha_b) + "," +
           std::to_string(r.counts.tp) + "," + std::to_string(r.counts.tn) + "," +
           std::to_string(r.counts.fp) + "," + std::to_string(r.counts.fn) + "," +
           io::format_number(r.mcc) + "," + io::format_number(r.sensitivity) + "," +
           io::format_number(r.specificity) + "," + io::format_number(r.m_f) + "," +
           io::format_number(r.m_nkl) + "," + (r.kl_floored ? "1" : "0") + "\n";
  }
  return out;
}

io::Json summary_to_json(const std::vector<SummaryRow>& rows) {
  io::Json results = io::Json::object();
  for (const auto& row : rows) {
    io::Json cell{{"replicates", row.replicates}, {"sd_degenerate", row.sd_degenerate}};
    for (const auto& [name, s] : row.metrics) cell[name] = {{"mean", s.mean}, {"sd", s.sd}};
    results[row.model][std::to_string(row.p)][row.method] = std::move(cell);
  }
  return io::Json{
      {"results", std::move(results)},
      {"generator", std::string(kGeneratorName)},
      {"conventions",
       {{"mcc_zero_denominator", 0},
        {"sensitivity_no_positives", 1},
        {"specificity_no_negatives", 1},
        {"sd_divisor", "R-1"},
        {"kl_non_pd_floor", 1e-6}}}};
}

void write_campaign(const CampaignResult& result, const std::filesystem::path& out_dir) {
  io::write_text(out_dir / "replicates.csv", format_replicates_csv(result.records));
  std::string timings = "model,p,replicate,method,seconds\n";
  for (const auto& r : result.records) {
    timings += r.model + "," + std::to_string(r.p) + "," + std::to_string(r.replicate) + "," +
               r.method + "," + io::format_number(r.seconds) + "\n";
  }
  io::write_text(out_dir / "timings.csv", timings);
  io::Json summary = result.records.empty() ? io::Json{{"results", io::Json::object()}}
                                            : summary_to_json(aggregate(result.records));
  summary["failures"] = result.failures;
  io::write_text(out_dir / "summary.json", io::dump_canonical(summary));
  for (const auto& [key, counts] : result.zero_frequency) {
    io::write_csv(out_dir / ("zero_freq_" + key.first + "_p" + std::to_string(key.second) + ".csv"),
                  counts);
  }
}

LdaCampaign run_lda_campaign(const LabeledDataset& dataset, const LdaWorkflow& workflow,
                             Index repetitions, std::uint64_t seed, unsigned threads) {
  if (repetitions < 1) throw ContractViolation("lda: need at least one repetition");
  const auto count = static_cast<std::size_t>(repetitions);
  std::vector<std::optional<LdaRepetition>> slots(count);
  std::vector<std::string> errors(count);
  LdaWorkflow inner = workflow;
  inner.threads = 1;
  parallel_for(count, threads, [&](std::size_t r) {
    try {
      slots[r] = run_lda_repetition(dataset, inner, split_seed(seed, r));
    } catch (const NumericalError& e) {
      errors[r] = "repetition " + std::to_string(r) + ": " + e.what();
    }
  });
  LdaCampaign out;
  for (std::size_t r = 0; r < count; ++r) {
    if (slots[r]) out.repetitions.push_back(std::move(*slots[r]));
    if (!errors[r].empty()) out.failures.push_back(errors[r]);
  }
  return out;
}

std::string format_lda_csv(const LdaCampaign& campaign) {
  std::string out = "repetition,seed,alpha_f,alpha_b,sensitivity,specificity,mcc,edges\n";
  for (std::size_t r = 0; r < campaign.repetitions.size(); ++r) {
    const auto& rep = campaign.repetitions[r];
    out += std::to_string(r) + "," + std::to_string(rep.seed) + "," +
           io::format_number(rep.thresholds.forward()) + "," +
           io::format_number(rep.thresholds.backward()) + "," +
           io::format_number(rep.prediction.sensitivity) + "," +
           io::format_number(rep.prediction.specificity) + "," +
           io::format_number(rep.prediction.mcc) + "," + std::to_string(rep.edges) + "\n";
  }
  return out;
}

io::Json lda_summary_json(const LdaCampaign& campaign) {
  std::vector<double> sens, spec, m, edges;
  for (const auto& rep : campaign.repetitions) {
    sens.push_back(rep.prediction.sensitivity);
    spec.push_back(rep.prediction.specificity);
    m.push_back(rep.prediction.mcc);
    edges.push_back(static_cast<double>(rep.edges));
  }
  io::Json out{{"repetitions", campaign.repetitions.size()},
               {"sd_degenerate", campaign.repetitions.size() < 2},
               {"failures", campaign.failures}};
  if (campaign.repetitions.empty()) return out;
  auto cell = [](const std::vector<double>& v) {
    const auto s = summarize(v);
    return io::Json{{"mean", s.mean}, {"sd", s.sd}};
  };
  out["Sensitivity"] = cell(sens);
  out["Specificity"] = cell(spec);
  out["MCC"] = cell(m);
  out["Number of Edges"] = cell(edges);
  return out;
}

}  // namespace gstep
