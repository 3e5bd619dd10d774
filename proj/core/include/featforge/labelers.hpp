#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "featforge/graph.hpp"

namespace featforge {

enum class TaskKind { cycle, clique, lcc };

// Node-classification task: Ci (in a simple cycle of length i), Ki (in a
// clique on i vertices) or LCC (per-node triangle count).
struct TaskSpec {
  TaskKind kind = TaskKind::cycle;
  std::size_t size = 3;

  static TaskSpec cycle(std::size_t length) { return {TaskKind::cycle, length}; }
  static TaskSpec clique(std::size_t size) { return {TaskKind::clique, size}; }
  static TaskSpec lcc() { return {TaskKind::lcc, 0}; }

  // Accepts "C3", "K4", "LCC" (case-insensitive).
  static TaskSpec parse(std::string_view text);
  std::string name() const;
  void validate() const;
  bool binary() const noexcept { return kind != TaskKind::lcc; }

  friend bool operator==(const TaskSpec&, const TaskSpec&) = default;
};

struct NodeLabels {
  std::vector<int> values;
  TaskSpec task;
  std::size_t num_classes = 2;

  // Fraction of nodes with a nonzero label.
  double positive_fraction() const noexcept;
};

// Labelers enumerate exhaustively; graphs above this size are rejected.
inline constexpr std::size_t kMaxLabelNodes = 64;

NodeLabels label_cycles(const Graph& g, std::size_t length);
NodeLabels label_cliques(const Graph& g, std::size_t size);
NodeLabels label_lcc(const Graph& g);
NodeLabels label_nodes(const Graph& g, const TaskSpec& task);

}  // namespace featforge
