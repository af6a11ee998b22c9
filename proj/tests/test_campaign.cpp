#include <doctest.h>

#include <filesystem>

#include "gstep/campaign.hpp"
#include "gstep/io.hpp"

using namespace gstep;
namespace fs = std::filesystem;

namespace {

CampaignSpec small_spec(unsigned threads) {
  CampaignSpec spec;
  spec.models = {ModelSpec{"ar1", 8, 0.4, 5}, ModelSpec{"bg", 10, 0.4, 5}};
  spec.n = 60;
  spec.replicates = 3;
  spec.grid = CvGrid::cross({0.2, 0.4, 0.95}, {0.05, 0.1});
  spec.seed = 17;
  spec.threads = threads;
  return spec;
}

}  // namespace

TEST_CASE("campaign spec parsing") {
  auto json = io::Json::parse(R"({
    "models": [{"label": "ar1", "p": 10}, {"label": "bg", "p": 20, "block_size": 4}],
    "n": 80, "replicates": 4, "folds": 4, "seed": 3,
    "grid": {"forward": [0.3, 0.5], "backward": [0.1]}
  })");
  auto spec = campaign_from_json(json);
  CHECK(spec.models.size() == 2);
  CHECK(spec.models[1].block_size == 4);
  CHECK(spec.n == 80);
  CHECK(spec.replicates == 4);
  CHECK(spec.grid.pairs.size() == 2);

  CHECK(campaign_from_json(io::Json::parse(R"({"models": [{"label": "ar1", "p": 5}]})"))
            .grid.pairs.size() == 190);
  CHECK_THROWS(campaign_from_json(io::Json::parse(R"({"models": [{"label": "xyz", "p": 5}]})")));
}

TEST_CASE("campaign results do not depend on the thread count") {
  const auto serial = run_campaign(small_spec(1));
  const auto threaded = run_campaign(small_spec(4));
  CHECK(serial.records.size() == 6);
  CHECK(format_replicates_csv(serial.records) == format_replicates_csv(threaded.records));
  CHECK(serial.zero_frequency == threaded.zero_frequency);
  for (const auto& r : serial.records) {
    CHECK(r.counts.total() == static_cast<std::uint64_t>(r.p * (r.p - 1) / 2));
  }
}

TEST_CASE("campaign output files") {
  const auto out = fs::temp_directory_path() / "gstep_campaign_test";
  fs::remove_all(out);
  write_campaign(run_campaign(small_spec(1)), out);
  CHECK(fs::exists(out / "replicates.csv"));
  CHECK(fs::exists(out / "timings.csv"));
  CHECK(fs::exists(out / "zero_freq_ar1_p8.csv"));
  auto summary = io::Json::parse(io::read_text(out / "summary.json"));
  CHECK(summary["results"]["bg"]["10"]["GS"]["mcc"].contains("mean"));
  CHECK(summary["generator"] == "mt19937_64+polar-normal");
}

TEST_CASE("imported estimates are scored alongside") {
  const auto dir = fs::temp_directory_path() / "gstep_import_test";
  fs::remove_all(dir);
  auto spec = small_spec(1);
  spec.models = {ModelSpec{"ar1", 8, 0.4, 5}};
  spec.replicates = 2;
  const auto truth = build_model(spec.models[0], spec.seed);
  for (Index r = 0; r < 2; ++r) {
    io::write_csv(dir / "oracle" / (replicate_tag(spec.models[0], r) + ".csv"), truth.omega);
  }
  spec.import_estimates = dir;
  const auto result = run_campaign(spec);
  int oracle = 0;
  for (const auto& rec : result.records) {
    if (rec.method != "oracle") continue;
    ++oracle;
    CHECK(rec.mcc == 1.0);
    CHECK(rec.m_f == 0.0);
  }
  CHECK(oracle == 2);
}

TEST_CASE("lda campaign summary") {
  auto d = make_two_class_fixture(10, 25, 40, 1.5, 4, 2);
  LdaWorkflow w;
  w.screen = 8;
  w.grid = CvGrid::cross({0.3, 0.95}, {0.1});
  auto one = run_lda_campaign(d, w, 1, 5, 1);
  auto summary = lda_summary_json(one);
  CHECK(summary["sd_degenerate"] == true);
  CHECK(summary.contains("MCC"));
  CHECK(summary.contains("Number of Edges"));
  auto serial = run_lda_campaign(d, w, 3, 5, 1);
  auto threaded = run_lda_campaign(d, w, 3, 5, 3);
  CHECK(format_lda_csv(serial) == format_lda_csv(threaded));
}
