#include "featforge/stress.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <random>

#include "featforge/error.hpp"
#include "featforge/rng.hpp"

namespace featforge {
namespace {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

constexpr double kCoincident = 1e-6;
constexpr double kTiny = 1e-12;

class NodeObjective {
 public:
  NodeObjective(const DistanceMatrix& d, const std::vector<double>& pos, std::size_t dim)
      : d_(d), pos_(pos), dim_(dim) {}

  Eigen::Map<const Vec> at(std::size_t v) const { return {pos_.data() + v * dim_, static_cast<Eigen::Index>(dim_)}; }

  // Partial stress of node m placed at x, over all pairs (m, i).
  double value(std::size_t m, const Vec& x) const {
    double e = 0.0;
    for (std::size_t i = 0; i < d_.size(); ++i) {
      if (i == m) continue;
      const double dij = d_(m, i);
      const double r = (x - at(i)).norm();
      e += (r - dij) * (r - dij) / (dij * dij);
    }
    return e;
  }

  Vec gradient(std::size_t m, const Vec& x) const {
    Vec g = Vec::Zero(static_cast<Eigen::Index>(dim_));
    for (std::size_t i = 0; i < d_.size(); ++i) {
      if (i == m) continue;
      const Vec diff = x - at(i);
      const double r = diff.norm();
      if (r < kTiny) continue;
      const double dij = d_(m, i);
      g += (2.0 / (dij * dij)) * (1.0 - dij / r) * diff;
    }
    return g;
  }

  Mat hessian(std::size_t m, const Vec& x) const {
    const auto k = static_cast<Eigen::Index>(dim_);
    Mat h = Mat::Zero(k, k);
    for (std::size_t i = 0; i < d_.size(); ++i) {
      if (i == m) continue;
      const Vec diff = x - at(i);
      const double r = diff.norm();
      if (r < kTiny) continue;
      const double dij = d_(m, i);
      const double w2 = 2.0 / (dij * dij);
      h += w2 * ((1.0 - dij / r) * Mat::Identity(k, k) + (dij / (r * r * r)) * diff * diff.transpose());
    }
    return h;
  }

 private:
  const DistanceMatrix& d_;
  const std::vector<double>& pos_;
  std::size_t dim_;
};

// Newton direction when the Hessian is positive definite and well conditioned.
std::optional<Vec> newton_step(const Mat& h, const Vec& grad, double max_condition) {
  Eigen::SelfAdjointEigenSolver<Mat> eig(h);
  if (eig.info() != Eigen::Success) return std::nullopt;
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  if (lo <= 0.0 || hi / lo > max_condition) return std::nullopt;
  return Vec(-(eig.eigenvectors() * ((eig.eigenvectors().transpose() * grad).array() /
                                     eig.eigenvalues().array()).matrix()));
}

}  // namespace

double stress_value(const DistanceMatrix& d, std::span<const double> positions, std::size_t dim) {
  double s = 0.0;
  const std::size_t n = d.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      double r2 = 0.0;
      for (std::size_t k = 0; k < dim; ++k) {
        const double diff = positions[i * dim + k] - positions[j * dim + k];
        r2 += diff * diff;
      }
      const double dij = d(i, j);
      const double gap = std::sqrt(r2) - dij;
      s += gap * gap / (dij * dij);
    }
  }
  return s;
}

StressLayout minimize_stress(const Graph& g, std::size_t dim, std::uint64_t seed,
                             const StressOptions& opts) {
  if (dim == 0) throw Error(Errc::invalid_parameter, "embedding dimension must be >= 1");
  if (!g.connected()) throw Error(Errc::disconnected, "stress layout needs a connected graph");
  const std::size_t n = g.size();
  const DistanceMatrix d = all_pairs_shortest_paths(g);
  const double diam = static_cast<double>(d.max());

  StressLayout out;
  out.dim = dim;
  out.tol = opts.tol > 0.0 ? opts.tol : 1e-4 * std::max(d.mean_off_diagonal(), 1.0);
  const std::size_t max_outer = opts.max_outer > 0 ? opts.max_outer : 100 * std::max<std::size_t>(n, 1);

  Rng rng = make_rng(seed);
  std::uniform_real_distribution<double> init(0.0, std::max(diam, 1.0));
  out.positions.resize(n * dim);
  for (auto& x : out.positions) x = init(rng);

  NodeObjective obj(d, out.positions, dim);
  double stress = stress_value(d, out.positions, dim);
  out.initial_stress = stress;
  out.stress_trace.push_back(stress);

  auto place = [&](std::size_t m, const Vec& x) {
    std::copy(x.data(), x.data() + dim, out.positions.begin() + static_cast<std::ptrdiff_t>(m * dim));
  };
  auto max_gradient = [&](std::size_t& arg) {
    double best = -1.0;
    for (std::size_t v = 0; v < n; ++v) {
      const double norm = obj.gradient(v, Vec(obj.at(v))).norm();
      if (norm > best) {
        best = norm;
        arg = v;
      }
    }
    return std::max(best, 0.0);
  };

  std::size_t m = 0;
  out.grad_norm = n > 1 ? max_gradient(m) : 0.0;
  while (n > 1 && out.grad_norm >= out.tol && out.iterations < max_outer) {
    ++out.iterations;
    Vec x = obj.at(m);
    double local = obj.value(m, x);
    for (std::size_t inner = 0; inner < opts.max_inner; ++inner) {
      const Vec grad = obj.gradient(m, x);
      const double gnorm = grad.norm();
      if (gnorm < out.tol) break;

      bool moved = false;
      if (auto step = newton_step(obj.hessian(m, x), grad, opts.max_condition)) {
        const Vec cand = x + *step;
        const double e = obj.value(m, cand);
        if (e < local) {
          stress += e - local;
          x = cand;
          local = e;
          moved = true;
        }
      }
      if (!moved) {
        double length = opts.fallback_step * std::max(diam, 1.0);
        const Vec dir = -grad / gnorm;
        for (std::size_t h = 0; h <= opts.max_halvings; ++h, length *= 0.5) {
          const Vec cand = x + length * dir;
          const double e = obj.value(m, cand);
          if (e < local) {
            stress += e - local;
            x = cand;
            local = e;
            moved = true;
            break;
          }
        }
      }
      place(m, x);
      if (!moved) break;
    }
    out.stress_trace.push_back(stress);
    out.grad_norm = max_gradient(m);
  }

  out.stress = stress_value(d, out.positions, dim);
  double min_dist = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      double r2 = 0.0;
      for (std::size_t k = 0; k < dim; ++k) {
        const double diff = out.positions[i * dim + k] - out.positions[j * dim + k];
        r2 += diff * diff;
      }
      min_dist = std::min(min_dist, std::sqrt(r2));
    }
  }
  out.coincident = min_dist < kCoincident;
  return out;
}

StressLayout minimize_stress_best_of(const Graph& g, std::size_t dim, std::uint64_t seed,
                                     std::size_t restarts, const StressOptions& opts) {
  if (restarts == 0) throw Error(Errc::invalid_parameter, "restarts must be >= 1");
  StressLayout best;
  for (std::size_t r = 0; r < restarts; ++r) {
    StressLayout run = minimize_stress(g, dim, derive_seed(seed, {r}), opts);
    if (r == 0 || run.stress < best.stress) best = std::move(run);
  }
  return best;
}

}  // namespace featforge
