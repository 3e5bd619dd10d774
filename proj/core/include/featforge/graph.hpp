#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace featforge {

using NodeId = std::uint32_t;

struct Edge {
  NodeId u = 0;
  NodeId v = 0;

  friend auto operator<=>(const Edge&, const Edge&) = default;
};

enum class Connectivity { strict, allow_disconnected };

// Immutable simple undirected graph on nodes 0..n-1.
//
// Edges are stored normalized (u < v), sorted and deduplicated; neighbor lists
// are sorted. A dense adjacency table backs `adjacent()` since every graph we
// handle is desk-scale.
class Graph {
 public:
  Graph() = default;

  // Throws Error{node_out_of_range | self_loop | disconnected}.
  static Graph build(std::size_t n, std::span<const Edge> edges,
                     Connectivity mode = Connectivity::strict);
  static Graph build(std::size_t n, std::initializer_list<std::pair<NodeId, NodeId>> edges,
                     Connectivity mode = Connectivity::strict);

  std::size_t size() const noexcept { return n_; }
  std::size_t num_edges() const noexcept { return edges_.size(); }
  const std::vector<Edge>& edges() const noexcept { return edges_; }

  std::span<const NodeId> neighbors(NodeId v) const noexcept {
    return {adj_.data() + offsets_[v], adj_.data() + offsets_[v + 1]};
  }
  std::size_t degree(NodeId v) const noexcept { return offsets_[v + 1] - offsets_[v]; }
  std::size_t max_degree() const noexcept { return max_degree_; }
  std::vector<std::size_t> degrees() const;

  bool adjacent(NodeId u, NodeId v) const noexcept { return dense_[u * n_ + v] != 0; }
  bool connected() const noexcept { return connected_; }

  // Relabels node v as perm[v]. `perm` must be a bijection on 0..n-1.
  Graph permuted(std::span<const NodeId> perm) const;

  // Complement graph; connectivity is validated according to `mode`.
  Graph complement(Connectivity mode = Connectivity::strict) const;

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.n_ == b.n_ && a.edges_ == b.edges_;
  }

 private:
  std::size_t n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::size_t> offsets_{0};
  std::vector<NodeId> adj_;
  std::vector<std::uint8_t> dense_;
  std::size_t max_degree_ = 0;
  bool connected_ = true;
};

// Dense n x n hop-distance matrix of a connected graph.
class DistanceMatrix {
 public:
  DistanceMatrix() = default;
  explicit DistanceMatrix(std::size_t n) : n_(n), d_(n * n, 0) {}

  std::size_t size() const noexcept { return n_; }
  std::uint32_t operator()(std::size_t i, std::size_t j) const noexcept { return d_[i * n_ + j]; }
  std::uint32_t& operator()(std::size_t i, std::size_t j) noexcept { return d_[i * n_ + j]; }
  std::span<const std::uint32_t> row(std::size_t i) const noexcept {
    return {d_.data() + i * n_, n_};
  }

  std::uint32_t max() const noexcept;
  double mean_off_diagonal() const noexcept;

  friend bool operator==(const DistanceMatrix&, const DistanceMatrix&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<std::uint32_t> d_;
};

inline constexpr std::uint32_t kUnreachable = 0xFFFFFFFFu;

// Hop distances from `source`; unreachable nodes get kUnreachable.
std::vector<std::uint32_t> bfs_distances(const Graph& g, NodeId source);

DistanceMatrix all_pairs_shortest_paths(const Graph& g);
std::size_t diameter(const Graph& g);
std::optional<std::size_t> is_regular(const Graph& g);

}  // namespace featforge
