// gstep: simulate, fit, cross-validate and benchmark graphical stepwise
// covariance selection.
//
// Exit codes: 0 success, 1 usage error, 2 data error, 3 numerical failure.

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "gstep/campaign.hpp"
#include "gstep/io.hpp"
#include "gstep/random.hpp"

namespace fs = std::filesystem;
using namespace gstep;

namespace {

constexpr int kUsage = 1;
constexpr int kData = 2;
constexpr int kNumerical = 3;

struct Globals {
  std::uint64_t seed = 1;
  unsigned threads = 1;
  std::string out = ".";
};

CvGrid load_grid(const std::string& grid_path) {
  return grid_path.empty() ? CvGrid::standard() : io::read_grid_csv(grid_path);
}

struct SimulateArgs {
  std::string model;
  Index p = 50;
  Index n = 100;
  double rho = 0.4;
  Index block_size = 5;
  std::string truth;
  bool header = false;
  Index n1 = 34;
  Index n2 = 99;
  double shift = 1.0;
  Index shifted = 5;
};

int cmd_simulate(const SimulateArgs& a, const Globals& g) {
  const fs::path out(g.out);
  if (a.model == "twoclass") {
    const auto data = make_two_class_fixture(a.p, a.n1, a.n2, a.shift, a.shifted, g.seed);
    io::write_labeled_csv(out / "labeled.csv", data);
    std::cout << "wrote " << (out / "labeled.csv").string() << "\n";
    return 0;
  }
  PrecisionModel model;
  if (a.model == "custom") {
    if (a.truth.empty()) throw ContractViolation("simulate custom needs --truth <model.json>");
    model = io::model_from_json(io::Json::parse(io::read_text(a.truth)));
  } else {
    model = build_model(ModelSpec{a.model, a.p, a.rho, a.block_size}, g.seed);
  }
  const auto sample = sample_mvn(model, a.n, g.seed);
  std::vector<std::string> header;
  if (a.header) {
    for (Index j = 0; j < model.p; ++j) header.push_back("x" + std::to_string(j + 1));
  }
  io::write_csv(out / "samples.csv", sample.data, header);
  auto truth = io::model_to_json(model);
  truth["sample_seed"] = g.seed;
  truth["n"] = a.n;
  io::write_text(out / "truth.json", io::dump_canonical(truth));
  std::cout << "wrote " << (out / "samples.csv").string() << " (" << a.n << "x" << model.p
            << ") and " << (out / "truth.json").string() << "\n";
  return 0;
}

struct FitArgs {
  std::string data;
  std::optional<double> alpha_f;
  std::optional<double> alpha_b;
  bool cv = false;
  Index folds = 5;
  std::string grid;
  bool trace = false;
  std::optional<Index> cap;
  std::optional<std::size_t> max_iter;
};

int cmd_fit(const FitArgs& a, const Globals& g) {
  const fs::path out(g.out);
  const Matrix data = io::read_csv(a.data).values;
  GsaOptions options;
  options.cap = a.cap;
  options.max_iter = a.max_iter;

  std::optional<Thresholds> thresholds;
  if (a.cv) {
    CvOptions cv;
    cv.gsa = options;
    cv.threads = g.threads;
    const auto result = select_thresholds(data, a.folds, load_grid(a.grid), g.seed, cv);
    io::write_text(out / "cv.json", io::dump_canonical(io::cv_to_json(result)));
    thresholds = result.best;
  } else {
    if (!a.alpha_f || !a.alpha_b) {
      throw ContractViolation("fit needs --alpha-f and --alpha-b, or --cv");
    }
    thresholds = Thresholds(*a.alpha_f, *a.alpha_b);
  }
  const auto fit = run_gsa(data, *thresholds, options);
  io::write_text(out / "fit.json", io::dump_canonical(io::fit_to_json(fit, a.trace)));
  io::write_text(out / "edges.tsv", io::format_edge_tsv(fit.edges));
  io::write_text(out / "thresholds.json",
                 io::dump_canonical(io::Json{{"alpha_f", thresholds->forward()},
                                             {"alpha_b", thresholds->backward()},
                                             {"selected_by_cv", a.cv}}));
  std::cout << "alpha_f=" << thresholds->forward() << " alpha_b=" << thresholds->backward()
            << " edges=" << fit.edges.size() << " iterations=" << fit.iterations << "\n";
  return 0;
}

int cmd_cv(const std::string& data_path, Index folds, const std::string& grid, const Globals& g) {
  const Matrix data = io::read_csv(data_path).values;
  CvOptions cv;
  cv.threads = g.threads;
  const auto result = select_thresholds(data, folds, load_grid(grid), g.seed, cv);
  io::write_text(fs::path(g.out) / "cv.json", io::dump_canonical(io::cv_to_json(result)));
  std::cout << "alpha_f=" << result.best.forward() << " alpha_b=" << result.best.backward()
            << " score=" << result.best_score << " (" << result.scores.size() << " grid points, "
            << result.failures.size() << " failed)\n";
  return 0;
}

int cmd_bench(const std::string& spec_path, std::optional<std::string> import_dir,
              bool write_samples, const Globals& g, bool seed_given, bool threads_given) {
  const fs::path spec_file(spec_path);
  auto spec = campaign_from_json(io::Json::parse(io::read_text(spec_file)),
                                 spec_file.parent_path());
  if (seed_given) spec.seed = g.seed;
  if (threads_given) spec.threads = g.threads;
  if (import_dir) spec.import_estimates = *import_dir;
  spec.write_samples = spec.write_samples || write_samples;
  const fs::path out(g.out);
  const auto result = run_campaign(spec, out / "samples");
  write_campaign(result, out);
  std::cout << result.records.size() << " replicate records written to " << out.string() << "\n";
  for (const auto& f : result.failures) std::cerr << "failed: " << f << "\n";
  return result.failures.empty() ? 0 : kNumerical;
}

struct LdaArgs {
  std::string data;
  std::string label_column = "label";
  Index screen = 50;
  Index repetitions = 100;
  Index test_pos = 5;
  Index test_neg = 16;
  Index folds = 5;
  std::string grid;
};

int cmd_lda(const LdaArgs& a, const Globals& g) {
  const auto dataset = io::read_labeled_csv(a.data, a.label_column);
  if (dataset.group_size(1) == 0 || dataset.group_size(2) == 0) {
    throw ContractViolation("lda: both classes (1 and 2) must be present");
  }
  LdaWorkflow workflow;
  workflow.screen = a.screen;
  workflow.test_group_1 = a.test_pos;
  workflow.test_group_2 = a.test_neg;
  workflow.folds = a.folds;
  workflow.grid = load_grid(a.grid);
  const auto campaign = run_lda_campaign(dataset, workflow, a.repetitions, g.seed, g.threads);
  const fs::path out(g.out);
  io::write_text(out / "lda_repetitions.csv", format_lda_csv(campaign));
  io::write_text(out / "lda_summary.json", io::dump_canonical(lda_summary_json(campaign)));
  std::cout << campaign.repetitions.size() << " repetitions written to " << out.string() << "\n";
  for (const auto& f : campaign.failures) std::cerr << "failed: " << f << "\n";
  return campaign.failures.empty() ? 0 : kNumerical;
}

int cmd_heatmap(const std::vector<std::string>& fits, const Globals& g) {
  std::vector<EdgeSet> estimates;
  Index p = -1;
  for (const auto& path : fits) {
    const auto fit = io::fit_from_json(io::Json::parse(io::read_text(path)));
    if (p >= 0 && fit.edges.p() != p) throw DataError(path + ": node count differs from other fits");
    p = fit.edges.p();
    estimates.push_back(fit.edges);
  }
  io::write_csv(fs::path(g.out) / "zero_freq.csv", zero_frequency_matrix(estimates, p));
  std::cout << "zero-frequency matrix over " << estimates.size() << " fits written\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Graphical stepwise covariance selection"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  auto* seed_opt = app.add_option("--seed", g.seed, "Random seed")->capture_default_str();
  auto* threads_opt =
      app.add_option("--threads", g.threads, "Worker threads")->check(CLI::PositiveNumber);
  app.add_option("--out", g.out, "Output directory")->capture_default_str();

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Draw a sample and write the ground truth");
  simulate->add_option("model", sim.model, "ar1 | nn2 | bg | custom | twoclass")
      ->required()
      ->check(CLI::IsMember({"ar1", "nn2", "bg", "custom", "twoclass"}));
  simulate->add_option("--p", sim.p, "Dimension")->capture_default_str();
  simulate->add_option("--n", sim.n, "Sample size")->capture_default_str();
  simulate->add_option("--rho", sim.rho, "AR(1) correlation")->capture_default_str();
  simulate->add_option("--block-size", sim.block_size, "BG block size")->capture_default_str();
  simulate->add_option("--truth", sim.truth, "Model JSON for 'custom'");
  simulate->add_flag("--header", sim.header, "Write a header row");
  simulate->add_option("--n1", sim.n1, "twoclass: rows in group 1")->capture_default_str();
  simulate->add_option("--n2", sim.n2, "twoclass: rows in group 2")->capture_default_str();
  simulate->add_option("--shift", sim.shift, "twoclass: mean shift")->capture_default_str();
  simulate->add_option("--shifted", sim.shifted, "twoclass: shifted features")->capture_default_str();

  FitArgs fit;
  auto* fit_cmd = app.add_subcommand("fit", "Fit the stepwise estimator to a CSV sample");
  fit_cmd->add_option("data", fit.data, "Sample CSV")->required();
  fit_cmd->add_option("--alpha-f", fit.alpha_f, "Forward threshold");
  fit_cmd->add_option("--alpha-b", fit.alpha_b, "Backward threshold");
  fit_cmd->add_flag("--cv", fit.cv, "Select thresholds by K-fold cross-validation");
  fit_cmd->add_option("--folds", fit.folds, "CV folds")->capture_default_str();
  fit_cmd->add_option("--grid", fit.grid, "Two-column CSV of (alpha_f, alpha_b) pairs");
  fit_cmd->add_flag("--trace", fit.trace, "Include the add/remove trace in fit.json");
  fit_cmd->add_option("--cap", fit.cap, "Maximum neighbourhood size");
  fit_cmd->add_option("--max-iter", fit.max_iter, "Iteration limit");

  std::string cv_data, cv_grid;
  Index cv_folds = 5;
  auto* cv_cmd = app.add_subcommand("cv", "Cross-validation score surface over a grid");
  cv_cmd->add_option("data", cv_data, "Sample CSV")->required();
  cv_cmd->add_option("--folds", cv_folds, "CV folds")->capture_default_str();
  cv_cmd->add_option("--grid", cv_grid, "Two-column CSV of (alpha_f, alpha_b) pairs");

  std::string bench_spec;
  std::optional<std::string> import_dir;
  bool write_samples = false;
  auto* bench = app.add_subcommand("bench", "Run a Monte Carlo campaign");
  bench->add_option("campaign", bench_spec, "Campaign JSON")->required();
  bench->add_option("--import-estimates", import_dir,
                    "Directory of external estimates <method>/<model>_p<p>_r<rep>.csv");
  bench->add_flag("--write-samples", write_samples, "Write every replicate sample");

  LdaArgs lda;
  auto* lda_cmd = app.add_subcommand("lda", "Repeated-split LDA classification");
  lda_cmd->add_option("data", lda.data, "Labeled CSV")->required();
  lda_cmd->add_option("--label-column", lda.label_column)->capture_default_str();
  lda_cmd->add_option("--screen", lda.screen, "Features kept by t screening")->capture_default_str();
  lda_cmd->add_option("--repetitions", lda.repetitions)->capture_default_str();
  lda_cmd->add_option("--test-pos", lda.test_pos, "Group-1 rows held out")->capture_default_str();
  lda_cmd->add_option("--test-neg", lda.test_neg, "Group-2 rows held out")->capture_default_str();
  lda_cmd->add_option("--folds", lda.folds)->capture_default_str();
  lda_cmd->add_option("--grid", lda.grid, "Two-column CSV of (alpha_f, alpha_b) pairs");

  std::vector<std::string> heat_fits;
  auto* heatmap = app.add_subcommand("heatmap", "Zero-frequency matrix over fit JSON files");
  heatmap->add_option("fits", heat_fits, "fit.json files")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsage;
  }

  try {
    fs::create_directories(g.out);
    if (*simulate) return cmd_simulate(sim, g);
    if (*fit_cmd) return cmd_fit(fit, g);
    if (*cv_cmd) return cmd_cv(cv_data, cv_folds, cv_grid, g);
    if (*bench) {
      return cmd_bench(bench_spec, import_dir, write_samples, g, seed_opt->count() > 0,
                       threads_opt->count() > 0);
    }
    if (*lda_cmd) return cmd_lda(lda, g);
    if (*heatmap) return cmd_heatmap(heat_fits, g);
  } catch (const ContractViolation& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kData;
  } catch (const io::Json::exception& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kData;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kNumerical;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kData;
  }
  return kUsage;
}
