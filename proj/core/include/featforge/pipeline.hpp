#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "featforge/dataset.hpp"
#include "featforge/features.hpp"
#include "featforge/generators.hpp"
#include "featforge/labelers.hpp"

namespace featforge {

struct ExperimentConfig {
  TaskSpec task = TaskSpec::cycle(3);
  Family family = Family::regular;
  std::size_t n = kDefaultNodes;
  std::size_t count = 200;  // graphs per split
  std::uint64_t seed = 42;
  std::vector<SchemeSpec> schemes;
  // Calibration overrides; at most the one matching `family` may be set.
  std::optional<std::size_t> degree;
  std::optional<double> p;
  std::optional<double> radius;
  std::filesystem::path out = ".";
  std::size_t pilot_graphs = 200;
  std::size_t threads = 0;  // 0: FEATFORGE_THREADS, else hardware concurrency

  // Keys mirror the field names; unknown keys are rejected.
  static ExperimentConfig from_json_text(std::string_view text);
  static ExperimentConfig load(const std::filesystem::path& path);
  void validate() const;

  // "C3_1000", "K4_200", "LCC_10".
  std::string dataset_name() const;
};

struct PipelineResult {
  std::filesystem::path dataset_path;
  std::filesystem::path report_path;
  CalibrationResult calibration;
  bool calibration_overridden = false;
  double train_positive_rate = 0.0;
  double test_positive_rate = 0.0;
  // Scheme name ("none" for plain WL) -> WL-optimal AUROC; empty when the
  // test split has a single class.
  std::map<std::string, std::optional<double>> wl_auroc;
  std::vector<DatasetRecord> records;
};

// Worker count: explicit value, else FEATFORGE_THREADS, else hardware.
std::size_t resolve_threads(std::size_t requested);

// Generates `count` train and `count` test graphs, labels and featurizes them,
// and writes <out>/<name>.jsonl plus <out>/<name>.report.json. Outputs are
// removed again if any stage fails.
PipelineResult run_pipeline(const ExperimentConfig& config);

// Adds `scheme` to every record; seeds derive from (seed, record index).
void featurize_records(std::vector<DatasetRecord>& records, const SchemeSpec& scheme,
                       std::uint64_t seed, std::size_t threads = 0);

// WL-optimal AUROC of the records' train/test split using feature `scheme`
// ("none" for plain refinement).
std::optional<double> wl_auroc_of(const std::vector<DatasetRecord>& records, std::string_view scheme);

}  // namespace featforge
