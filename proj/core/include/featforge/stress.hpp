#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "featforge/graph.hpp"

namespace featforge {

struct StressOptions {
  double tol = 0.0;            // <= 0: 1e-4 * mean pairwise hop distance
  std::size_t max_outer = 0;   // 0: 100 * n
  std::size_t max_inner = 50;
  double max_condition = 1e8;  // Newton steps are skipped above this
  double fallback_step = 0.1;  // gradient fallback length, in units of the diameter
  std::size_t max_halvings = 20;
};

// Positions minimizing sum_{i<j} w_ij (|p_i - p_j| - d_ij)^2, w_ij = d_ij^-2.
struct StressLayout {
  std::size_t dim = 0;
  std::vector<double> positions;  // n x dim, row-major
  double stress = 0.0;
  double initial_stress = 0.0;
  double grad_norm = 0.0;         // max per-node gradient norm at exit
  double tol = 0.0;
  std::size_t iterations = 0;     // outer iterations
  std::vector<double> stress_trace;  // initial value, then one entry per outer iteration
  bool coincident = false;        // two nodes closer than 1e-6

  std::span<const double> position(std::size_t v) const {
    return {positions.data() + v * dim, dim};
  }
};

double stress_value(const DistanceMatrix& d, std::span<const double> positions, std::size_t dim);

// Localized Newton-Raphson: repeatedly moves the node with the largest
// gradient to a minimum of its partial stress, holding the others fixed.
// Initial positions are i.i.d. uniform in [0, D]^dim drawn from `seed`.
StressLayout minimize_stress(const Graph& g, std::size_t dim, std::uint64_t seed,
                             const StressOptions& opts = {});

// Runs `restarts` independent solves (seeds derived from `seed`) and keeps the
// lowest final stress.
StressLayout minimize_stress_best_of(const Graph& g, std::size_t dim, std::uint64_t seed,
                                     std::size_t restarts, const StressOptions& opts = {});

}  // namespace featforge
