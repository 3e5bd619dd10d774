#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "featforge/graph.hpp"

namespace featforge {

inline constexpr std::size_t kMaxCanonicalNodes = 64;

// Canonical labeling of a graph.
//
// `perm[v]` is the canonical rank of input node v. `cert` is the upper
// triangle of the adjacency matrix under that ranking, row-major, packed
// most-significant-bit first into 64-bit words so that comparing the word
// vectors compares the bitstrings lexicographically. Two graphs have equal
// certificates iff they are isomorphic.
struct CanonicalForm {
  std::size_t n = 0;
  std::vector<NodeId> perm;
  std::vector<std::uint64_t> cert;

  std::string cert_string() const;

  // Search statistics.
  std::size_t leaves = 0;
  std::size_t automorphisms = 0;
};

// Individualization-refinement search: cells are refined to the coarsest
// equitable partition (1-WL), the first smallest non-singleton cell is
// branched on, and the minimal leaf under (refinement trace, certificate)
// order wins. Throws Error{graph_too_large} above kMaxCanonicalNodes.
CanonicalForm canonical_form(const Graph& g);

// Refines `colors` in place to the coarsest equitable partition finer than
// the input. Colors come out dense and ordered by (previous color, sorted
// neighbor colors), so the result only depends on the isomorphism class of
// (g, colors). Returns the number of refinement rounds performed.
std::size_t refine_equitable(const Graph& g, std::vector<std::uint32_t>& colors);

}  // namespace featforge
