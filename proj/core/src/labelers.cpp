#include "featforge/labelers.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <charconv>
#include <cstdint>

#include "featforge/error.hpp"

namespace featforge {
namespace {

using Mask = std::uint64_t;

constexpr Mask bit(std::size_t i) noexcept { return Mask{1} << i; }

void check_size(const Graph& g) {
  if (g.size() > kMaxLabelNodes) {
    throw Error(Errc::graph_too_large,
                "labelers enumerate exhaustively; n=" + std::to_string(g.size()) +
                    " exceeds " + std::to_string(kMaxLabelNodes));
  }
}

std::vector<Mask> adjacency_masks(const Graph& g) {
  std::vector<Mask> adj(g.size(), 0);
  for (const auto& e : g.edges()) {
    adj[e.u] |= bit(e.v);
    adj[e.v] |= bit(e.u);
  }
  return adj;
}

// Depth-first search for a simple cycle of exactly `length` nodes through
// `start`. `path` holds the current simple path beginning at `start`.
class CycleSearch {
 public:
  CycleSearch(const Graph& g, std::size_t length) : g_(g), length_(length) {}

  bool find(NodeId start, std::vector<NodeId>& path) {
    start_ = start;
    dist_to_start_ = bfs_distances(g_, start);
    path.assign(1, start);
    return extend(path, bit(start));
  }

 private:
  bool extend(std::vector<NodeId>& path, Mask visited) {
    const NodeId tail = path.back();
    if (path.size() == length_) return g_.adjacent(tail, start_);
    const std::size_t remaining = length_ - path.size();
    for (NodeId w : g_.neighbors(tail)) {
      if (visited & bit(w)) continue;
      // w must still be able to close back to start within the remaining edges.
      if (dist_to_start_[w] > remaining) continue;
      // Orientation dedup: each cycle is traversed from start in both directions;
      // fixing path[1] < last node halves the search without losing cycles.
      if (path.size() == length_ - 1 && length_ > 2 && w < path[1]) continue;
      path.push_back(w);
      if (extend(path, visited | bit(w))) return true;
      path.pop_back();
    }
    return false;
  }

  const Graph& g_;
  std::size_t length_;
  NodeId start_ = 0;
  std::vector<std::uint32_t> dist_to_start_;
};

// Searches for `need` mutually adjacent vertices inside `candidates`; the
// found members are appended to `members`.
bool find_clique(const std::vector<Mask>& adj, Mask candidates, std::size_t need,
                 std::vector<NodeId>& members) {
  if (need == 0) return true;
  while (static_cast<std::size_t>(std::popcount(candidates)) >= need) {
    const auto u = static_cast<NodeId>(std::countr_zero(candidates));
    candidates &= ~bit(u);
    members.push_back(u);
    if (find_clique(adj, candidates & adj[u], need - 1, members)) return true;
    members.pop_back();
  }
  return false;
}

NodeLabels binary_labels(const Graph& g, const TaskSpec& task) {
  NodeLabels out;
  out.values.assign(g.size(), 0);
  out.task = task;
  out.num_classes = 2;
  return out;
}

}  // namespace

TaskSpec TaskSpec::parse(std::string_view text) {
  std::string upper(text);
  std::transform(upper.begin(), upper.end(), upper.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  if (upper == "LCC") return lcc();
  if (upper.size() >= 2 && (upper[0] == 'C' || upper[0] == 'K')) {
    std::size_t size = 0;
    const char* first = upper.data() + 1;
    const char* last = upper.data() + upper.size();
    auto [ptr, ec] = std::from_chars(first, last, size);
    if (ec == std::errc{} && ptr == last) {
      TaskSpec t = upper[0] == 'C' ? cycle(size) : clique(size);
      t.validate();
      return t;
    }
  }
  throw Error(Errc::invalid_parameter, "unknown task '" + std::string(text) + "'");
}

std::string TaskSpec::name() const {
  switch (kind) {
    case TaskKind::cycle: return "C" + std::to_string(size);
    case TaskKind::clique: return "K" + std::to_string(size);
    case TaskKind::lcc: return "LCC";
  }
  return "?";
}

void TaskSpec::validate() const {
  if (kind != TaskKind::lcc && size < 3) {
    throw Error(Errc::invalid_parameter, "task size must be >= 3, got " + std::to_string(size));
  }
}

double NodeLabels::positive_fraction() const noexcept {
  if (values.empty()) return 0.0;
  const auto pos = std::count_if(values.begin(), values.end(), [](int v) { return v > 0; });
  return static_cast<double>(pos) / static_cast<double>(values.size());
}

NodeLabels label_cycles(const Graph& g, std::size_t length) {
  const TaskSpec task = TaskSpec::cycle(length);
  task.validate();
  check_size(g);
  NodeLabels out = binary_labels(g, task);
  if (length > g.size()) return out;

  CycleSearch search(g, length);
  std::vector<NodeId> path;
  for (NodeId v = 0; v < g.size(); ++v) {
    if (out.values[v] != 0) continue;
    if (search.find(v, path)) {
      for (NodeId u : path) out.values[u] = 1;
    }
  }
  return out;
}

NodeLabels label_cliques(const Graph& g, std::size_t size) {
  const TaskSpec task = TaskSpec::clique(size);
  task.validate();
  check_size(g);
  NodeLabels out = binary_labels(g, task);
  if (size > g.size()) return out;

  const auto adj = adjacency_masks(g);
  std::vector<NodeId> members;
  for (NodeId v = 0; v < g.size(); ++v) {
    if (out.values[v] != 0) continue;
    if (g.degree(v) + 1 < size) continue;
    members.assign(1, v);
    if (find_clique(adj, adj[v], size - 1, members)) {
      for (NodeId u : members) out.values[u] = 1;
    }
  }
  return out;
}

NodeLabels label_lcc(const Graph& g) {
  check_size(g);
  const auto adj = adjacency_masks(g);
  NodeLabels out;
  out.task = TaskSpec::lcc();
  out.values.assign(g.size(), 0);
  for (NodeId v = 0; v < g.size(); ++v) {
    int twice = 0;
    for (NodeId u : g.neighbors(v)) twice += std::popcount(adj[u] & adj[v]);
    out.values[v] = twice / 2;
  }
  const int max_label =
      out.values.empty() ? 0 : *std::max_element(out.values.begin(), out.values.end());
  out.num_classes = static_cast<std::size_t>(max_label) + 1;
  return out;
}

NodeLabels label_nodes(const Graph& g, const TaskSpec& task) {
  switch (task.kind) {
    case TaskKind::cycle: return label_cycles(g, task.size);
    case TaskKind::clique: return label_cliques(g, task.size);
    case TaskKind::lcc: return label_lcc(g);
  }
  throw Error(Errc::invalid_parameter, "unknown task kind");
}

}  // namespace featforge
