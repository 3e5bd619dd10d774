#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "featforge/features.hpp"
#include "featforge/generators.hpp"
#include "featforge/graph.hpp"
#include "featforge/labelers.hpp"
#include "featforge/wl.hpp"

namespace featforge {

// One graph of a dataset, as stored on one JSON Lines row. Fields serialize
// in declaration order.
struct DatasetRecord {
  std::string id;
  std::size_t n = 0;
  std::vector<Edge> edges;
  std::vector<int> labels;
  TaskSpec task;
  std::string split;  // "train" | "test"
  std::map<std::string, FeatureMatrix> features;
  std::map<std::string, RegenSpec> regen;
  std::optional<std::vector<Point2>> coords;

  Graph graph() const;
  NodeLabels node_labels() const;
  // Features named by `scheme` (a single name or a '+'-joined combination).
  // Throws MissingScheme if any part is absent.
  FeatureMatrix feature(std::string_view scheme) const;
  LabeledGraph labeled(std::optional<std::string_view> scheme = std::nullopt) const;

  void add_feature(FeatureMatrix f);
};

// Significant digits kept for real values on disk.
inline constexpr int kFloatDigits = 9;

double round_to_digits(double x, int digits = kFloatDigits);

std::string to_json_line(const DatasetRecord& record);
// Throws Error{schema_error} naming `line_no`.
DatasetRecord parse_json_line(std::string_view line, std::size_t line_no);

void write_dataset(std::span<const DatasetRecord> records, const std::filesystem::path& path);
std::vector<DatasetRecord> read_dataset(const std::filesystem::path& path);

}  // namespace featforge
