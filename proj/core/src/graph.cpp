#include "featforge/graph.hpp"

#include <algorithm>
#include <string>

#include "featforge/error.hpp"

namespace featforge {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::node_out_of_range: return "NodeOutOfRange";
    case Errc::self_loop: return "SelfLoop";
    case Errc::disconnected: return "Disconnected";
    case Errc::infeasible_degree: return "InfeasibleDegree";
    case Errc::retries_exhausted: return "RetriesExhausted";
    case Errc::invalid_parameter: return "InvalidParameter";
    case Errc::no_feasible_degree: return "NoFeasibleDegree";
    case Errc::graph_too_large: return "GraphTooLarge";
    case Errc::dim_too_small: return "DimTooSmall";
    case Errc::row_count_mismatch: return "RowCountMismatch";
    case Errc::degenerate_labels: return "DegenerateLabels";
    case Errc::missing_scheme: return "MissingScheme";
    case Errc::io_error: return "IoError";
    case Errc::schema_error: return "SchemaError";
  }
  return "Unknown";
}

Graph Graph::build(std::size_t n, std::span<const Edge> edges, Connectivity mode) {
  Graph g;
  g.n_ = n;
  g.edges_.reserve(edges.size());
  for (const auto& e : edges) {
    if (e.u >= n || e.v >= n) {
      throw Error(Errc::node_out_of_range, "edge (" + std::to_string(e.u) + "," +
                                               std::to_string(e.v) + ") with n=" +
                                               std::to_string(n));
    }
    if (e.u == e.v) throw Error(Errc::self_loop, "node " + std::to_string(e.u));
    g.edges_.push_back(e.u < e.v ? e : Edge{e.v, e.u});
  }
  std::sort(g.edges_.begin(), g.edges_.end());
  g.edges_.erase(std::unique(g.edges_.begin(), g.edges_.end()), g.edges_.end());

  std::vector<std::size_t> deg(n, 0);
  for (const auto& e : g.edges_) {
    ++deg[e.u];
    ++deg[e.v];
  }
  g.offsets_.assign(n + 1, 0);
  for (std::size_t v = 0; v < n; ++v) g.offsets_[v + 1] = g.offsets_[v] + deg[v];
  g.adj_.resize(g.offsets_[n]);
  std::vector<std::size_t> fill(g.offsets_.begin(), g.offsets_.end() - 1);
  g.dense_.assign(n * n, 0);
  for (const auto& e : g.edges_) {
    g.adj_[fill[e.u]++] = e.v;
    g.adj_[fill[e.v]++] = e.u;
    g.dense_[e.u * n + e.v] = 1;
    g.dense_[e.v * n + e.u] = 1;
  }
  for (std::size_t v = 0; v < n; ++v) {
    std::sort(g.adj_.begin() + g.offsets_[v], g.adj_.begin() + g.offsets_[v + 1]);
  }
  g.max_degree_ = n == 0 ? 0 : *std::max_element(deg.begin(), deg.end());

  if (n > 0) {
    auto dist = bfs_distances(g, 0);
    g.connected_ = std::none_of(dist.begin(), dist.end(),
                                [](std::uint32_t d) { return d == kUnreachable; });
  }
  if (!g.connected_ && mode == Connectivity::strict) {
    throw Error(Errc::disconnected, "graph on " + std::to_string(n) + " nodes is not connected");
  }
  return g;
}

Graph Graph::build(std::size_t n, std::initializer_list<std::pair<NodeId, NodeId>> edges,
                   Connectivity mode) {
  std::vector<Edge> list;
  list.reserve(edges.size());
  for (auto [u, v] : edges) list.push_back({u, v});
  return build(n, list, mode);
}

std::vector<std::size_t> Graph::degrees() const {
  std::vector<std::size_t> out(n_);
  for (std::size_t v = 0; v < n_; ++v) out[v] = degree(static_cast<NodeId>(v));
  return out;
}

Graph Graph::permuted(std::span<const NodeId> perm) const {
  std::vector<Edge> relabeled;
  relabeled.reserve(edges_.size());
  for (const auto& e : edges_) relabeled.push_back({perm[e.u], perm[e.v]});
  return build(n_, relabeled, connected_ ? Connectivity::strict : Connectivity::allow_disconnected);
}

Graph Graph::complement(Connectivity mode) const {
  std::vector<Edge> out;
  for (NodeId u = 0; u < n_; ++u) {
    for (NodeId v = u + 1; v < n_; ++v) {
      if (!adjacent(u, v)) out.push_back({u, v});
    }
  }
  return build(n_, out, mode);
}

std::uint32_t DistanceMatrix::max() const noexcept {
  return d_.empty() ? 0 : *std::max_element(d_.begin(), d_.end());
}

double DistanceMatrix::mean_off_diagonal() const noexcept {
  if (n_ < 2) return 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = i + 1; j < n_; ++j) sum += (*this)(i, j);
  }
  return sum / (static_cast<double>(n_) * static_cast<double>(n_ - 1) / 2.0);
}

std::vector<std::uint32_t> bfs_distances(const Graph& g, NodeId source) {
  std::vector<std::uint32_t> dist(g.size(), kUnreachable);
  std::vector<NodeId> queue;
  queue.reserve(g.size());
  dist[source] = 0;
  queue.push_back(source);
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const NodeId u = queue[head];
    for (NodeId w : g.neighbors(u)) {
      if (dist[w] == kUnreachable) {
        dist[w] = dist[u] + 1;
        queue.push_back(w);
      }
    }
  }
  return dist;
}

DistanceMatrix all_pairs_shortest_paths(const Graph& g) {
  const std::size_t n = g.size();
  DistanceMatrix d(n);
  for (NodeId s = 0; s < n; ++s) {
    auto row = bfs_distances(g, s);
    for (std::size_t t = 0; t < n; ++t) d(s, t) = row[t];
  }
  return d;
}

std::size_t diameter(const Graph& g) { return all_pairs_shortest_paths(g).max(); }

std::optional<std::size_t> is_regular(const Graph& g) {
  if (g.size() == 0) return std::nullopt;
  const std::size_t d = g.degree(0);
  for (NodeId v = 1; v < g.size(); ++v) {
    if (g.degree(v) != d) return std::nullopt;
  }
  return d;
}

}  // namespace featforge
