#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "featforge/error.hpp"
#include "featforge/pipeline.hpp"

using namespace featforge;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path fresh_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "featforge_tests" / name;
  fs::remove_all(dir);
  return dir;
}

}  // namespace

TEST(Config, ParseAndReject) {
  const auto c = ExperimentConfig::from_json_text(
      R"({"task":"K4","family":"erdos-renyi","n":16,"count":5,"seed":9,"schemes":["canon:16","rbits:2"],"p":0.3})");
  EXPECT_EQ(c.task, TaskSpec::clique(4));
  EXPECT_EQ(c.family, Family::erdos_renyi);
  EXPECT_EQ(c.n, 16u);
  EXPECT_EQ(c.count, 5u);
  EXPECT_EQ(c.seed, 9u);
  ASSERT_EQ(c.schemes.size(), 2u);
  EXPECT_EQ(c.schemes[1].name(), "rbits2");
  EXPECT_EQ(c.p, 0.3);
  EXPECT_EQ(c.dataset_name(), "K4_5");
  EXPECT_NO_THROW(c.validate());

  EXPECT_THROW(ExperimentConfig::from_json_text(R"({"tsak":"C3"})"), Error);
  EXPECT_THROW(ExperimentConfig::from_json_text(R"({"n":"twenty"})"), Error);
  EXPECT_THROW(ExperimentConfig::from_json_text("{"), Error);
  EXPECT_THROW(ExperimentConfig::from_json_text(R"({"count":0})").validate(), Error);
  EXPECT_THROW(ExperimentConfig::from_json_text(R"({"family":"regular","p":0.2})").validate(), Error);
  EXPECT_THROW(ExperimentConfig::from_json_text(R"({"schemes":["canon:10"]})").validate(), Error);
  EXPECT_THROW(ExperimentConfig::from_json_text(R"({"schemes":["gtpos"]})").validate(), Error);
}

TEST(Threads, Resolution) {
  EXPECT_EQ(resolve_threads(3), 3u);
  ::setenv("FEATFORGE_THREADS", "2", 1);
  EXPECT_EQ(resolve_threads(0), 2u);
  ::setenv("FEATFORGE_THREADS", "junk", 1);
  EXPECT_GE(resolve_threads(0), 1u);
  ::unsetenv("FEATFORGE_THREADS");
}

TEST(Pipeline, DeterministicAcrossRunsAndThreadCounts) {
  ExperimentConfig c;
  c.task = TaskSpec::lcc();
  c.count = 10;
  c.seed = 5;
  c.degree = 4;
  c.pilot_graphs = 20;
  c.schemes = {SchemeSpec::parse("canon:20"), SchemeSpec::parse("pos:2"), SchemeSpec::parse("rbits:2")};
  c.out = fresh_dir("det_a");
  c.threads = 1;
  const auto a = run_pipeline(c);
  c.out = fresh_dir("det_b");
  c.threads = 4;
  const auto b = run_pipeline(c);
  EXPECT_EQ(a.dataset_path.filename(), "LCC_10.jsonl");
  EXPECT_EQ(slurp(a.dataset_path), slurp(b.dataset_path));
  EXPECT_EQ(slurp(a.report_path), slurp(b.report_path));
  EXPECT_EQ(read_dataset(a.dataset_path).size(), 20u);
}

TEST(Pipeline, RecordsAreComplete) {
  ExperimentConfig c;
  c.task = TaskSpec::cycle(3);
  c.count = 6;
  c.degree = 3;
  c.pilot_graphs = 10;
  c.schemes = {SchemeSpec::parse("linf:20")};
  c.out = fresh_dir("complete");
  const auto r = run_pipeline(c);
  ASSERT_EQ(r.records.size(), 12u);
  EXPECT_EQ(r.records.front().id, "C3_6-train-0000");
  EXPECT_EQ(r.records.back().id, "C3_6-test-0005");
  for (const auto& rec : r.records) {
    EXPECT_EQ(rec.features.count("linf20"), 1u);
    EXPECT_EQ(is_regular(rec.graph()), 3u);
  }
  EXPECT_TRUE(r.calibration_overridden);
  EXPECT_EQ(r.wl_auroc.at("none"), 0.5);
  const std::string report = slurp(r.report_path);
  for (const char* key : {"\"balance\"", "\"wl_auroc\"", "\"calibration\"", "\"pilot_rate\"", "\"seeds\""}) {
    EXPECT_NE(report.find(key), std::string::npos) << key;
  }
}

TEST(Pipeline, UnitDiskCarriesCoordinates) {
  ExperimentConfig c;
  c.task = TaskSpec::cycle(3);
  c.family = Family::unit_disk;
  c.radius = 0.45;
  c.count = 3;
  c.pilot_graphs = 10;
  c.schemes = {SchemeSpec::parse("gtpos")};
  c.out = fresh_dir("udg");
  const auto r = run_pipeline(c);
  for (const auto& rec : read_dataset(r.dataset_path)) {
    ASSERT_TRUE(rec.coords.has_value());
    EXPECT_EQ(rec.features.count("gtpos2"), 1u);
  }
}

TEST(Pipeline, FailureLeavesNoOutputs) {
  ExperimentConfig c;
  c.count = 2;
  c.degree = 3;
  c.pilot_graphs = 5;
  c.out = fresh_dir("fail");
  // A non-empty directory squatting on the report path makes the last write fail.
  fs::create_directories(c.out / "C3_2.report.json" / "blocker");
  EXPECT_THROW(run_pipeline(c), Error);
  EXPECT_FALSE(fs::exists(c.out / "C3_2.jsonl"));
  EXPECT_FALSE(fs::exists(c.out / "C3_2.jsonl.tmp"));

  c.degree = 20;  // infeasible: fails before anything is written
  EXPECT_THROW(run_pipeline(c), Error);
  EXPECT_FALSE(fs::exists(c.out / "C3_2.jsonl"));
}

TEST(Pipeline, FeaturizeExistingRecords) {
  ExperimentConfig c;
  c.count = 4;
  c.degree = 3;
  c.pilot_graphs = 5;
  c.out = fresh_dir("featurize");
  auto recs = run_pipeline(c).records;
  featurize_records(recs, SchemeSpec::parse("rbits:2"), 11, 2);
  auto again = recs;
  featurize_records(again, SchemeSpec::parse("rbits:2"), 11, 1);
  for (std::size_t i = 0; i < recs.size(); ++i) {
    ASSERT_EQ(recs[i].features.at("rbits2"), again[i].features.at("rbits2"));
  }
  EXPECT_TRUE(wl_auroc_of(recs, "rbits2").has_value());
}
