#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "featforge/graph.hpp"
#include "featforge/labelers.hpp"

namespace featforge {

enum class Family { regular, erdos_renyi, unit_disk };

std::string_view to_string(Family f) noexcept;
Family parse_family(std::string_view text);

inline constexpr std::size_t kDefaultNodes = 20;
inline constexpr std::size_t kDefaultMaxRetries = 10000;

struct GenSpec {
  Family family = Family::regular;
  std::size_t n = kDefaultNodes;
  std::optional<std::size_t> degree;
  std::optional<double> p;
  std::optional<double> radius;
  std::uint64_t seed = 0;
  std::size_t max_retries = kDefaultMaxRetries;

  // Throws Error{invalid_parameter | infeasible_degree}.
  void validate() const;
};

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

struct GeometricGraph {
  Graph graph;
  std::vector<Point2> coords;
  double radius = 0.0;
};

Graph gen_regular(std::size_t n, std::size_t degree, std::uint64_t seed,
                  std::size_t max_retries = kDefaultMaxRetries);
Graph gen_erdos_renyi(std::size_t n, double p, std::uint64_t seed,
                      std::size_t max_retries = kDefaultMaxRetries);
GeometricGraph gen_unit_disk(std::size_t n, double radius, std::uint64_t seed,
                             std::size_t max_retries = kDefaultMaxRetries);

// Unit-disk graphs carry coordinates; other families return none.
struct Sample {
  Graph graph;
  std::optional<std::vector<Point2>> coords;
};

Sample generate(const GenSpec& spec);

struct CalibrationOptions {
  std::size_t pilot_graphs = 200;
  double band_low = 0.45;
  double band_high = 0.55;
  std::size_t max_bisection_steps = 25;
  std::size_t max_retries = kDefaultMaxRetries;
  // Skips the search: the given degree / p / radius is used as-is and only
  // its pilot rate is measured.
  std::optional<double> override_value;
};

struct CalibrationResult {
  GenSpec spec;
  std::string param;  // "degree" | "p" | "radius"
  double value = 0.0;
  double pilot_rate = 0.0;
  std::size_t steps = 0;
};

// Chooses the family parameter whose pilot positive-label fraction is closest
// to even. Regular graphs sweep every feasible degree; Erdős–Rényi and
// unit-disk graphs bisect on p / radius until the rate lands in the band.
CalibrationResult calibrate_balance(Family family, const TaskSpec& task, std::size_t n,
                                    std::uint64_t seed, const CalibrationOptions& opts = {});

// Positive-label fraction over `graphs` fresh samples of `spec`, pooled over
// all nodes. Each graph is drawn from derive_seed(spec.seed, {i}).
double measure_positive_rate(const GenSpec& spec, const TaskSpec& task, std::size_t graphs);

}  // namespace featforge
