#include "featforge/canonical.hpp"

#include <algorithm>
#include <numeric>

#include "featforge/error.hpp"

namespace featforge {
namespace {

using Colors = std::vector<std::uint32_t>;
using Invariant = std::vector<std::uint32_t>;

std::size_t count_cells(const Colors& colors) {
  if (colors.empty()) return 0;
  return *std::max_element(colors.begin(), colors.end()) + 1;
}

// Quotient of an equitable partition: cell sizes followed by the number of
// neighbors a member of cell i has in cell j, for all (i, j).
Invariant quotient(const Graph& g, const Colors& colors) {
  const std::size_t k = count_cells(colors);
  Invariant inv(k + k * k, 0);
  std::vector<NodeId> rep(k, 0);
  std::vector<bool> seen(k, false);
  for (NodeId v = 0; v < colors.size(); ++v) {
    ++inv[colors[v]];
    if (!seen[colors[v]]) {
      seen[colors[v]] = true;
      rep[colors[v]] = v;
    }
  }
  for (std::size_t c = 0; c < k; ++c) {
    for (NodeId w : g.neighbors(rep[c])) ++inv[k + c * k + colors[w]];
  }
  return inv;
}

Colors individualize(const Colors& colors, NodeId v) {
  Colors out(colors.size());
  for (NodeId u = 0; u < colors.size(); ++u) {
    out[u] = 2 * colors[u] + ((colors[u] == colors[v] && u != v) ? 1u : 0u);
  }
  // Re-densify, preserving order.
  Colors sorted(out);
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  for (auto& c : out) {
    c = static_cast<std::uint32_t>(std::lower_bound(sorted.begin(), sorted.end(), c) - sorted.begin());
  }
  return out;
}

struct Leaf {
  std::vector<Invariant> trace;
  std::vector<std::uint64_t> cert;
  std::vector<NodeId> perm;     // vertex -> rank
  std::vector<NodeId> inverse;  // rank -> vertex
  std::vector<NodeId> path;     // individualized vertices
};

std::vector<std::uint64_t> make_cert(const Graph& g, const std::vector<NodeId>& inverse) {
  const std::size_t n = g.size();
  const std::size_t bits = n * (n - (n > 0 ? 1 : 0)) / 2;
  std::vector<std::uint64_t> cert((bits + 63) / 64, 0);
  std::size_t idx = 0;
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t s = r + 1; s < n; ++s, ++idx) {
      if (g.adjacent(inverse[r], inverse[s])) cert[idx / 64] |= std::uint64_t{1} << (63 - idx % 64);
    }
  }
  return cert;
}

class Search {
 public:
  explicit Search(const Graph& g) : g_(g), n_(g.size()) {}

  CanonicalForm run() {
    Colors colors(n_, 0);
    refine_equitable(g_, colors);
    std::vector<Invariant> trace{quotient(g_, colors)};
    std::vector<NodeId> path;
    visit(colors, trace, path, Order::tied);

    CanonicalForm out;
    out.n = n_;
    out.perm = best_.perm;
    out.cert = best_.cert;
    out.leaves = leaves_;
    out.automorphisms = automorphisms_.size();
    return out;
  }

 private:
  enum class Order { tied, better };
  static constexpr std::size_t kNoUnwind = static_cast<std::size_t>(-1);
  static constexpr std::size_t kMaxStoredAutomorphisms = 256;

  // Returns the depth to unwind to, or kNoUnwind.
  std::size_t visit(const Colors& colors, std::vector<Invariant>& trace, std::vector<NodeId>& path,
                    Order order) {
    const std::size_t depth = path.size();
    if (have_best_ && order == Order::tied) {
      const auto& mine = trace.back();
      const auto& theirs = best_.trace[depth];
      if (mine > theirs) return kNoUnwind;
      if (mine < theirs) order = Order::better;
    }

    if (count_cells(colors) == n_) return leaf(colors, trace, path, order);

    // Target cell: first smallest non-singleton cell.
    const std::size_t k = count_cells(colors);
    std::vector<std::size_t> sizes(k, 0);
    for (auto c : colors) ++sizes[c];
    std::uint32_t target = 0;
    std::size_t target_size = n_ + 1;
    for (std::uint32_t c = 0; c < k; ++c) {
      if (sizes[c] > 1 && sizes[c] < target_size) {
        target = c;
        target_size = sizes[c];
      }
    }
    std::vector<NodeId> cell;
    for (NodeId v = 0; v < n_; ++v) {
      if (colors[v] == target) cell.push_back(v);
    }

    std::vector<NodeId> explored;
    for (NodeId v : cell) {
      if (!explored.empty() && same_orbit_as_explored(path, v, explored)) continue;
      explored.push_back(v);

      Colors child = individualize(colors, v);
      refine_equitable(g_, child);
      trace.push_back(quotient(g_, child));
      path.push_back(v);
      const std::size_t version = best_version_;
      const std::size_t unwind = visit(child, trace, path, order);
      path.pop_back();
      trace.pop_back();
      if (unwind != kNoUnwind && unwind < depth) return unwind;
      // A new best leaf below this node makes this node a prefix of it.
      if (best_version_ != version) order = Order::tied;
    }
    return kNoUnwind;
  }

  std::size_t leaf(const Colors& colors, const std::vector<Invariant>& trace,
                   const std::vector<NodeId>& path, Order order) {
    ++leaves_;
    std::vector<NodeId> inverse(n_);
    for (NodeId v = 0; v < n_; ++v) inverse[colors[v]] = v;
    auto cert = make_cert(g_, inverse);

    if (!have_best_ || order == Order::better || cert < best_.cert) {
      best_.trace = trace;
      best_.cert = std::move(cert);
      best_.perm.assign(colors.begin(), colors.end());
      best_.inverse = std::move(inverse);
      best_.path = path;
      have_best_ = true;
      ++best_version_;
      return kNoUnwind;
    }
    if (cert != best_.cert) return kNoUnwind;

    // Same certificate: vertex of rank r here maps to the vertex of rank r in
    // the best leaf, which is an automorphism fixing the common prefix.
    std::vector<NodeId> gamma(n_);
    for (NodeId v = 0; v < n_; ++v) gamma[v] = best_.inverse[colors[v]];
    if (automorphisms_.size() < kMaxStoredAutomorphisms) automorphisms_.push_back(std::move(gamma));

    std::size_t diverge = 0;
    while (diverge < path.size() && diverge < best_.path.size() &&
           path[diverge] == best_.path[diverge]) {
      ++diverge;
    }
    return diverge;
  }

  // True if v lies in the orbit of an explored sibling under the group
  // generated by known automorphisms that fix `prefix` pointwise.
  bool same_orbit_as_explored(const std::vector<NodeId>& prefix, NodeId v,
                              const std::vector<NodeId>& explored) const {
    if (automorphisms_.empty()) return false;
    std::vector<NodeId> parent(n_);
    std::iota(parent.begin(), parent.end(), NodeId{0});
    auto find = [&](NodeId x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    bool any = false;
    for (const auto& gamma : automorphisms_) {
      const bool fixes = std::all_of(prefix.begin(), prefix.end(),
                                     [&](NodeId p) { return gamma[p] == p; });
      if (!fixes) continue;
      any = true;
      for (NodeId x = 0; x < n_; ++x) {
        NodeId a = find(x), b = find(gamma[x]);
        if (a != b) parent[a] = b;
      }
    }
    if (!any) return false;
    const NodeId root = find(v);
    return std::any_of(explored.begin(), explored.end(), [&](NodeId e) { return find(e) == root; });
  }

  const Graph& g_;
  std::size_t n_;
  Leaf best_;
  bool have_best_ = false;
  std::size_t best_version_ = 0;
  std::size_t leaves_ = 0;
  std::vector<std::vector<NodeId>> automorphisms_;
};

}  // namespace

std::size_t refine_equitable(const Graph& g, std::vector<std::uint32_t>& colors) {
  const std::size_t n = g.size();
  std::size_t cells = count_cells(colors);
  std::vector<std::uint32_t> signature;
  std::vector<std::vector<std::uint32_t>> signatures(n);
  std::size_t rounds = 0;
  while (true) {
    ++rounds;
    for (NodeId v = 0; v < n; ++v) {
      signature.clear();
      signature.push_back(colors[v]);
      for (NodeId w : g.neighbors(v)) signature.push_back(colors[w]);
      std::sort(signature.begin() + 1, signature.end());
      signatures[v] = signature;
    }
    std::vector<const std::vector<std::uint32_t>*> order;
    order.reserve(n);
    for (const auto& s : signatures) order.push_back(&s);
    std::sort(order.begin(), order.end(), [](auto* a, auto* b) { return *a < *b; });
    order.erase(std::unique(order.begin(), order.end(), [](auto* a, auto* b) { return *a == *b; }),
                order.end());
    for (NodeId v = 0; v < n; ++v) {
      auto it = std::lower_bound(order.begin(), order.end(), &signatures[v],
                                 [](auto* a, auto* b) { return *a < *b; });
      colors[v] = static_cast<std::uint32_t>(it - order.begin());
    }
    if (order.size() == cells) break;
    cells = order.size();
  }
  return rounds;
}

std::string CanonicalForm::cert_string() const {
  const std::size_t bits = n * (n - (n > 0 ? 1 : 0)) / 2;
  std::string out(bits, '0');
  for (std::size_t i = 0; i < bits; ++i) {
    if ((cert[i / 64] >> (63 - i % 64)) & 1u) out[i] = '1';
  }
  return out;
}

CanonicalForm canonical_form(const Graph& g) {
  if (g.size() > kMaxCanonicalNodes) {
    throw Error(Errc::graph_too_large, "canonical search supports n <= " +
                                           std::to_string(kMaxCanonicalNodes) + ", got " +
                                           std::to_string(g.size()));
  }
  return Search(g).run();
}

}  // namespace featforge
