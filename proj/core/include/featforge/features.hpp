#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "featforge/canonical.hpp"
#include "featforge/generators.hpp"
#include "featforge/graph.hpp"
#include "featforge/stress.hpp"

namespace featforge {

enum class SchemeKind { canon, linf, pos, rnormal, runiform, rbits, gtpos };

// A feature scheme with its width, written "canon:20", "pos:2", "runiform".
struct SchemeSpec {
  SchemeKind kind = SchemeKind::canon;
  std::size_t dim = 1;

  static SchemeSpec parse(std::string_view text);
  // Compact name used as a dataset key, e.g. "canon20", "rbits2".
  std::string name() const;
  bool random() const noexcept;
  bool discrete() const noexcept;

  friend bool operator==(const SchemeSpec&, const SchemeSpec&) = default;
};

std::string_view to_string(SchemeKind kind) noexcept;

// How to redraw a random scheme: same distribution, any seed.
struct RegenSpec {
  std::string distribution;  // "rnormal" | "runiform" | "rbits"
  std::size_t dim = 1;
  std::uint64_t seed = 0;

  friend bool operator==(const RegenSpec&, const RegenSpec&) = default;
};

class FeatureMatrix {
 public:
  FeatureMatrix() = default;
  FeatureMatrix(std::string scheme, std::size_t rows, std::size_t dim, bool discrete)
      : scheme_(std::move(scheme)), rows_(rows), dim_(dim), discrete_(discrete),
        values_(rows * dim, 0.0) {}

  const std::string& scheme() const noexcept { return scheme_; }
  std::size_t rows() const noexcept { return rows_; }
  std::size_t dim() const noexcept { return dim_; }
  bool discrete() const noexcept { return discrete_; }

  double& at(std::size_t row, std::size_t col) noexcept { return values_[row * dim_ + col]; }
  double at(std::size_t row, std::size_t col) const noexcept { return values_[row * dim_ + col]; }
  std::span<const double> row(std::size_t r) const noexcept { return {values_.data() + r * dim_, dim_}; }
  const std::vector<double>& values() const noexcept { return values_; }
  std::vector<double>& values() noexcept { return values_; }

  const std::optional<RegenSpec>& regen() const noexcept { return regen_; }
  void set_regen(RegenSpec spec) { regen_ = std::move(spec); }

  friend bool operator==(const FeatureMatrix&, const FeatureMatrix&) = default;

 private:
  std::string scheme_;
  std::size_t rows_ = 0;
  std::size_t dim_ = 0;
  bool discrete_ = true;
  std::vector<double> values_;
  std::optional<RegenSpec> regen_;
};

// One-hot canonical node IDs, zero-padded to `dim`. Throws DimTooSmall if n > dim.
FeatureMatrix feat_canon(const Graph& g, std::size_t dim);
FeatureMatrix feat_canon(const CanonicalForm& form, std::size_t dim);

inline constexpr double kLinfPad = -1.0;

// Row j holds d(v_0, v_j), ..., d(v_{n-1}, v_j), padded with -1 up to `dim`.
FeatureMatrix feat_linf(const Graph& g, std::size_t dim);

struct PositionalFeatures {
  FeatureMatrix features;
  StressLayout layout;
};

PositionalFeatures feat_pos(const Graph& g, std::size_t dim, std::uint64_t seed,
                            const StressOptions& opts = {});

// Random node features; the regen spec records (distribution, dim, seed).
FeatureMatrix feat_random(std::size_t n, const SchemeSpec& scheme, std::uint64_t seed);
FeatureMatrix regenerate(const RegenSpec& regen, std::size_t n, std::uint64_t seed);

FeatureMatrix feat_ground_truth(std::span<const Point2> coords);

// Row-wise concatenation; scheme names are joined with '+'.
FeatureMatrix concat_features(std::span<const FeatureMatrix> parts);

// Dispatches on the scheme kind. `coords` is required for gtpos.
FeatureMatrix compute_features(const Graph& g, const SchemeSpec& scheme, std::uint64_t seed,
                               const std::optional<std::vector<Point2>>& coords = std::nullopt);

}  // namespace featforge
