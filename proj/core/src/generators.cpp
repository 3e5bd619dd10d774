#include "featforge/generators.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "featforge/error.hpp"
#include "featforge/rng.hpp"

namespace featforge {
namespace {

constexpr double kSqrt2 = 1.4142135623730951;

// Above this degree the plain configuration model rejects almost every
// pairing, so the stub pairing switches to keeping suitable pairs across
// reshuffles.
constexpr std::size_t kStrictPairingMaxDegree = 4;

void check_regular_params(std::size_t n, std::size_t d) {
  if (d < 2 && !(d == 1 && n == 2)) {
    throw Error(Errc::invalid_parameter, "regular degree must be >= 2, got " + std::to_string(d));
  }
  if (d >= n || (n * d) % 2 != 0) {
    throw Error(Errc::infeasible_degree,
                "no " + std::to_string(d) + "-regular graph on " + std::to_string(n) + " nodes");
  }
}

// Plain configuration model: one uniform pairing of all stubs; empty result on
// a loop or multi-edge.
std::optional<std::vector<Edge>> pair_stubs_strict(std::size_t n, std::size_t d, Rng& rng) {
  std::vector<NodeId> stubs;
  stubs.reserve(n * d);
  for (NodeId v = 0; v < n; ++v) stubs.insert(stubs.end(), d, v);
  std::shuffle(stubs.begin(), stubs.end(), rng);
  std::vector<Edge> edges;
  edges.reserve(stubs.size() / 2);
  for (std::size_t i = 0; i + 1 < stubs.size(); i += 2) {
    NodeId a = stubs[i], b = stubs[i + 1];
    if (a == b) return std::nullopt;
    edges.push_back(a < b ? Edge{a, b} : Edge{b, a});
  }
  std::sort(edges.begin(), edges.end());
  if (std::adjacent_find(edges.begin(), edges.end()) != edges.end()) return std::nullopt;
  return edges;
}

// Pairing with local rejection: unsuitable pairs are returned to the pool and
// reshuffled; restarts when no suitable pair is left.
std::optional<std::vector<Edge>> pair_stubs_incremental(std::size_t n, std::size_t d, Rng& rng) {
  std::vector<NodeId> stubs;
  stubs.reserve(n * d);
  for (NodeId v = 0; v < n; ++v) stubs.insert(stubs.end(), d, v);
  std::vector<std::uint8_t> adj(n * n, 0);
  std::vector<Edge> edges;

  auto suitable_pair_exists = [&](const std::vector<NodeId>& pool) {
    std::vector<NodeId> nodes(pool);
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      for (std::size_t j = i + 1; j < nodes.size(); ++j) {
        if (!adj[nodes[i] * n + nodes[j]]) return true;
      }
    }
    return false;
  };

  while (!stubs.empty()) {
    std::shuffle(stubs.begin(), stubs.end(), rng);
    std::vector<NodeId> leftover;
    for (std::size_t i = 0; i + 1 < stubs.size(); i += 2) {
      NodeId a = stubs[i], b = stubs[i + 1];
      if (a != b && !adj[a * n + b]) {
        adj[a * n + b] = adj[b * n + a] = 1;
        edges.push_back(a < b ? Edge{a, b} : Edge{b, a});
      } else {
        leftover.push_back(a);
        leftover.push_back(b);
      }
    }
    if (!leftover.empty() && !suitable_pair_exists(leftover)) return std::nullopt;
    stubs = std::move(leftover);
  }
  return edges;
}

// One attempt at a simple k-regular graph, connected or not.
std::optional<Graph> try_regular_any(std::size_t n, std::size_t k, Rng& rng) {
  if (k == 0) return Graph::build(n, std::span<const Edge>{}, Connectivity::allow_disconnected);
  auto edges = k <= kStrictPairingMaxDegree ? pair_stubs_strict(n, k, rng)
                                            : pair_stubs_incremental(n, k, rng);
  if (!edges) return std::nullopt;
  return Graph::build(n, *edges, Connectivity::allow_disconnected);
}

}  // namespace

std::string_view to_string(Family f) noexcept {
  switch (f) {
    case Family::regular: return "regular";
    case Family::erdos_renyi: return "erdos-renyi";
    case Family::unit_disk: return "unit-disk";
  }
  return "?";
}

Family parse_family(std::string_view text) {
  if (text == "regular") return Family::regular;
  if (text == "erdos-renyi" || text == "er") return Family::erdos_renyi;
  if (text == "unit-disk" || text == "udg") return Family::unit_disk;
  throw Error(Errc::invalid_parameter, "unknown graph family '" + std::string(text) + "'");
}

void GenSpec::validate() const {
  if (n == 0) throw Error(Errc::invalid_parameter, "n must be positive");
  if (max_retries == 0) throw Error(Errc::invalid_parameter, "max_retries must be positive");
  switch (family) {
    case Family::regular:
      if (!degree || p || radius) {
        throw Error(Errc::invalid_parameter, "regular family takes exactly a degree");
      }
      check_regular_params(n, *degree);
      break;
    case Family::erdos_renyi:
      if (!p || degree || radius) {
        throw Error(Errc::invalid_parameter, "erdos-renyi family takes exactly p");
      }
      if (!(*p > 0.0 && *p < 1.0)) throw Error(Errc::invalid_parameter, "p must be in (0,1)");
      break;
    case Family::unit_disk:
      if (!radius || degree || p) {
        throw Error(Errc::invalid_parameter, "unit-disk family takes exactly a radius");
      }
      if (!(*radius > 0.0 && *radius < kSqrt2)) {
        throw Error(Errc::invalid_parameter, "radius must be in (0, sqrt 2)");
      }
      break;
  }
}

Graph gen_regular(std::size_t n, std::size_t degree, std::uint64_t seed, std::size_t max_retries) {
  check_regular_params(n, degree);
  Rng rng = make_rng(seed);
  // Dense targets are sampled through their (sparse) complement; complementing
  // is a bijection between k-regular and (n-1-k)-regular graphs.
  const bool via_complement = degree > (n - 1) / 2;
  const std::size_t k = via_complement ? n - 1 - degree : degree;
  for (std::size_t attempt = 0; attempt < max_retries; ++attempt) {
    auto g = try_regular_any(n, k, rng);
    if (!g) continue;
    if (via_complement) {
      Graph c = g->complement(Connectivity::allow_disconnected);
      if (c.connected()) return c;
    } else if (g->connected()) {
      return std::move(*g);
    }
  }
  throw Error(Errc::retries_exhausted, "no connected " + std::to_string(degree) +
                                           "-regular graph on " + std::to_string(n) +
                                           " nodes after " + std::to_string(max_retries) +
                                           " attempts");
}

Graph gen_erdos_renyi(std::size_t n, double p, std::uint64_t seed, std::size_t max_retries) {
  if (!(p > 0.0 && p < 1.0)) throw Error(Errc::invalid_parameter, "p must be in (0,1)");
  Rng rng = make_rng(seed);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::vector<Edge> edges;
  for (std::size_t attempt = 0; attempt < max_retries; ++attempt) {
    edges.clear();
    for (NodeId u = 0; u < n; ++u) {
      for (NodeId v = u + 1; v < n; ++v) {
        if (coin(rng) < p) edges.push_back({u, v});
      }
    }
    Graph g = Graph::build(n, edges, Connectivity::allow_disconnected);
    if (g.connected()) return g;
  }
  throw Error(Errc::retries_exhausted, "no connected G(" + std::to_string(n) + ", " +
                                           std::to_string(p) + ") sample after " +
                                           std::to_string(max_retries) + " attempts");
}

GeometricGraph gen_unit_disk(std::size_t n, double radius, std::uint64_t seed,
                             std::size_t max_retries) {
  if (!(radius > 0.0 && radius < kSqrt2)) {
    throw Error(Errc::invalid_parameter, "radius must be in (0, sqrt 2)");
  }
  Rng rng = make_rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Point2> pts(n);
  std::vector<Edge> edges;
  for (std::size_t attempt = 0; attempt < max_retries; ++attempt) {
    for (auto& pt : pts) {
      pt.x = unit(rng);
      pt.y = unit(rng);
    }
    edges.clear();
    for (NodeId u = 0; u < n; ++u) {
      for (NodeId v = u + 1; v < n; ++v) {
        if (std::hypot(pts[u].x - pts[v].x, pts[u].y - pts[v].y) <= radius) edges.push_back({u, v});
      }
    }
    Graph g = Graph::build(n, edges, Connectivity::allow_disconnected);
    if (g.connected()) return {std::move(g), pts, radius};
  }
  throw Error(Errc::retries_exhausted, "no connected unit-disk graph with radius " +
                                           std::to_string(radius) + " after " +
                                           std::to_string(max_retries) + " attempts");
}

Sample generate(const GenSpec& spec) {
  spec.validate();
  switch (spec.family) {
    case Family::regular:
      return {gen_regular(spec.n, *spec.degree, spec.seed, spec.max_retries), std::nullopt};
    case Family::erdos_renyi:
      return {gen_erdos_renyi(spec.n, *spec.p, spec.seed, spec.max_retries), std::nullopt};
    case Family::unit_disk: {
      auto gg = gen_unit_disk(spec.n, *spec.radius, spec.seed, spec.max_retries);
      return {std::move(gg.graph), std::move(gg.coords)};
    }
  }
  throw Error(Errc::invalid_parameter, "unknown family");
}

double measure_positive_rate(const GenSpec& spec, const TaskSpec& task, std::size_t graphs) {
  std::size_t positives = 0;
  std::size_t total = 0;
  GenSpec item = spec;
  for (std::size_t i = 0; i < graphs; ++i) {
    item.seed = derive_seed(spec.seed, {i});
    const Sample s = generate(item);
    const NodeLabels labels = label_nodes(s.graph, task);
    positives += static_cast<std::size_t>(
        std::count_if(labels.values.begin(), labels.values.end(), [](int v) { return v > 0; }));
    total += labels.values.size();
  }
  return total == 0 ? 0.0 : static_cast<double>(positives) / static_cast<double>(total);
}

CalibrationResult calibrate_balance(Family family, const TaskSpec& task, std::size_t n,
                                    std::uint64_t seed, const CalibrationOptions& opts) {
  task.validate();
  CalibrationResult best;
  double best_gap = 2.0;

  auto spec_for = [&](double value, std::uint64_t stream) {
    GenSpec s;
    s.family = family;
    s.n = n;
    s.seed = derive_seed(seed, {static_cast<std::uint64_t>(family), stream});
    // Continuous-family pilots get 1% of the retry budget so an accepted
    // parameter stays comfortably sampleable at the full budget later.
    s.max_retries = family == Family::regular ? opts.max_retries
                                              : std::max<std::size_t>(1, opts.max_retries / 100);
    switch (family) {
      case Family::regular: s.degree = static_cast<std::size_t>(value); break;
      case Family::erdos_renyi: s.p = value; break;
      case Family::unit_disk: s.radius = value; break;
    }
    return s;
  };
  auto consider = [&](const GenSpec& s, const char* param, double value, double rate,
                      std::size_t step) {
    const double gap = std::abs(rate - 0.5);
    if (gap < best_gap) {
      best_gap = gap;
      best = {s, param, value, rate, step};
    }
  };

  if (opts.override_value) {
    const double value = *opts.override_value;
    GenSpec s = spec_for(value, 0);
    s.validate();
    const char* param = family == Family::regular       ? "degree"
                        : family == Family::erdos_renyi ? "p"
                                                        : "radius";
    s.max_retries = opts.max_retries;
    return {s, param, value, measure_positive_rate(s, task, opts.pilot_graphs), 0};
  }

  if (family == Family::regular) {
    std::size_t step = 0;
    for (std::size_t d = 2; d < n; ++d) {
      if ((n * d) % 2 != 0) continue;
      const GenSpec s = spec_for(static_cast<double>(d), d);
      try {
        consider(s, "degree", static_cast<double>(d), measure_positive_rate(s, task, opts.pilot_graphs),
                 step++);
      } catch (const Error& e) {
        if (e.code() != Errc::retries_exhausted) throw;
      }
    }
    if (best_gap > 1.0) {
      throw Error(Errc::no_feasible_degree,
                  "no feasible connected regular degree for n=" + std::to_string(n));
    }
    best.spec.max_retries = opts.max_retries;
    return best;
  }

  // Label presence is monotone in edge density, so the rate increases with
  // p and radius. Failed sampling (graphs too sparse to be connected) is
  // treated as a rate below the band.
  const char* param = family == Family::erdos_renyi ? "p" : "radius";
  double lo = 0.0;
  double hi = family == Family::erdos_renyi ? 1.0 : kSqrt2;
  for (std::size_t step = 0; step < opts.max_bisection_steps; ++step) {
    const double mid = 0.5 * (lo + hi);
    const GenSpec s = spec_for(mid, step);
    double rate = 0.0;
    try {
      rate = measure_positive_rate(s, task, opts.pilot_graphs);
    } catch (const Error& e) {
      if (e.code() != Errc::retries_exhausted) throw;
      lo = mid;
      continue;
    }
    consider(s, param, mid, rate, step);
    if (rate >= opts.band_low && rate <= opts.band_high) break;
    if (rate < opts.band_low) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  if (best_gap > 1.0) {
    throw Error(Errc::retries_exhausted,
                std::string("calibration could not sample any connected graph for ") + param);
  }
  best.spec.max_retries = opts.max_retries;
  return best;
}

}  // namespace featforge
