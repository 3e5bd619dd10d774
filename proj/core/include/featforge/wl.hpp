#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <span>
#include <vector>

#include "featforge/features.hpp"
#include "featforge/graph.hpp"
#include "featforge/labelers.hpp"

namespace featforge {

using Color = std::uint32_t;

// Exact color interning shared by every graph refined against it, so color
// ids are comparable across graphs. Safe for concurrent use.
class ColorUniverse {
 public:
  Color intern(const std::vector<std::int64_t>& key);
  std::size_t size() const;

 private:
  mutable std::mutex mu_;
  std::map<std::vector<std::int64_t>, Color> ids_;
};

struct Coloring {
  std::vector<Color> colors;
  std::size_t rounds = 0;
  std::map<Color, std::size_t> histogram;

  std::size_t num_classes() const noexcept { return histogram.size(); }
};

// Initial colors: constant without features; otherwise the interned feature
// row (exact bits for discrete schemes, rounded to 6 decimals otherwise).
std::vector<Color> initial_colors(const Graph& g, const FeatureMatrix* init, ColorUniverse& universe);

// One round: color <- intern(color, sorted neighbor colors).
std::vector<Color> refine_round(const Graph& g, std::span<const Color> colors, ColorUniverse& universe);

// Refines until the partition is stable. `rounds` counts refinement rounds
// including the one that confirmed stability. With `exact_rounds`, runs
// exactly that many rounds instead (used to align colors across graphs).
Coloring wl_refine(const Graph& g, const FeatureMatrix* init, ColorUniverse& universe,
                   std::optional<std::size_t> exact_rounds = std::nullopt);
Coloring wl_refine(const Graph& g, const FeatureMatrix* init = nullptr);

struct WlVerdict {
  bool distinguished = false;
  std::size_t rounds = 0;                  // rounds run in lockstep
  std::optional<std::size_t> first_round;  // first round whose histograms differ (0 = initial)
};

// 1-WL test on both graphs in a shared color universe. `distinguished` is
// a proof of non-isomorphism; the converse is inconclusive.
WlVerdict wl_distinguish(const Graph& g1, const Graph& g2, const FeatureMatrix* f1 = nullptr,
                         const FeatureMatrix* f2 = nullptr);
// Computes `scheme` on each graph with the same seed first.
WlVerdict wl_distinguish(const Graph& g1, const Graph& g2, const SchemeSpec& scheme, std::uint64_t seed);

struct LabeledGraph {
  Graph graph;
  NodeLabels labels;
  std::optional<FeatureMatrix> features;
};

// color -> empirical class distribution over training nodes; unseen colors
// get the uniform distribution.
class WlClassifier {
 public:
  explicit WlClassifier(std::size_t num_classes);

  void add(Color color, int label);
  void finalize();
  std::span<const double> predict(Color color) const;
  std::size_t num_classes() const noexcept { return num_classes_; }

 private:
  std::size_t num_classes_;
  std::map<Color, std::vector<double>> table_;
  std::vector<double> uniform_;
};

// Upper bound on what any WL-bounded model can score: fit WlClassifier on the
// stable colors of training nodes, score pooled test nodes. Binary tasks use
// plain AUROC; multiclass tasks average one-vs-rest AUROC weighted by test
// class support. Throws DegenerateLabels if the test split has one class.
double wl_auroc(std::span<const LabeledGraph> train, std::span<const LabeledGraph> test);

}  // namespace featforge
