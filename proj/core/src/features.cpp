#include "featforge/features.hpp"

#include <charconv>
#include <random>

#include "featforge/error.hpp"
#include "featforge/rng.hpp"

namespace featforge {
namespace {

void require_width(std::size_t n, std::size_t dim, std::string_view scheme) {
  if (n > dim) {
    throw Error(Errc::dim_too_small, std::string(scheme) + " needs dim >= n; n=" +
                                         std::to_string(n) + ", dim=" + std::to_string(dim));
  }
}

std::optional<SchemeKind> kind_from_name(std::string_view name) {
  if (name == "canon") return SchemeKind::canon;
  if (name == "linf") return SchemeKind::linf;
  if (name == "pos") return SchemeKind::pos;
  if (name == "rnormal") return SchemeKind::rnormal;
  if (name == "runiform") return SchemeKind::runiform;
  if (name == "rbits") return SchemeKind::rbits;
  if (name == "gtpos") return SchemeKind::gtpos;
  return std::nullopt;
}

}  // namespace

std::string_view to_string(SchemeKind kind) noexcept {
  switch (kind) {
    case SchemeKind::canon: return "canon";
    case SchemeKind::linf: return "linf";
    case SchemeKind::pos: return "pos";
    case SchemeKind::rnormal: return "rnormal";
    case SchemeKind::runiform: return "runiform";
    case SchemeKind::rbits: return "rbits";
    case SchemeKind::gtpos: return "gtpos";
  }
  return "?";
}

SchemeSpec SchemeSpec::parse(std::string_view text) {
  const auto colon = text.find(':');
  const std::string_view head = text.substr(0, colon);
  // Also accept the compact form produced by name(), e.g. "canon20".
  std::string_view kind_text = head;
  std::string_view dim_text = colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);
  if (colon == std::string_view::npos) {
    const auto digits = head.find_first_of("0123456789");
    if (digits != std::string_view::npos) {
      kind_text = head.substr(0, digits);
      dim_text = head.substr(digits);
    }
  }
  const auto kind = kind_from_name(kind_text);
  if (!kind) throw Error(Errc::invalid_parameter, "unknown feature scheme '" + std::string(text) + "'");

  SchemeSpec spec{*kind, 1};
  if (!dim_text.empty()) {
    auto [ptr, ec] = std::from_chars(dim_text.data(), dim_text.data() + dim_text.size(), spec.dim);
    if (ec != std::errc{} || ptr != dim_text.data() + dim_text.size() || spec.dim == 0) {
      throw Error(Errc::invalid_parameter, "bad dimension in scheme '" + std::string(text) + "'");
    }
  } else if (*kind == SchemeKind::canon || *kind == SchemeKind::linf) {
    spec.dim = kDefaultNodes;
  } else if (*kind == SchemeKind::pos || *kind == SchemeKind::gtpos) {
    spec.dim = 2;
  }
  if (*kind == SchemeKind::runiform && spec.dim != 1) {
    throw Error(Errc::invalid_parameter, "runiform is a single column");
  }
  if (*kind == SchemeKind::gtpos && spec.dim != 2) {
    throw Error(Errc::invalid_parameter, "gtpos is two-dimensional");
  }
  return spec;
}

std::string SchemeSpec::name() const { return std::string(to_string(kind)) + std::to_string(dim); }

bool SchemeSpec::random() const noexcept {
  return kind == SchemeKind::rnormal || kind == SchemeKind::runiform || kind == SchemeKind::rbits;
}

bool SchemeSpec::discrete() const noexcept {
  return kind != SchemeKind::pos && kind != SchemeKind::rnormal && kind != SchemeKind::gtpos;
}

FeatureMatrix feat_canon(const CanonicalForm& form, std::size_t dim) {
  require_width(form.n, dim, "canon");
  FeatureMatrix out("canon" + std::to_string(dim), form.n, dim, true);
  for (std::size_t v = 0; v < form.n; ++v) out.at(v, form.perm[v]) = 1.0;
  return out;
}

FeatureMatrix feat_canon(const Graph& g, std::size_t dim) {
  require_width(g.size(), dim, "canon");
  return feat_canon(canonical_form(g), dim);
}

FeatureMatrix feat_linf(const Graph& g, std::size_t dim) {
  const std::size_t n = g.size();
  require_width(n, dim, "linf");
  const DistanceMatrix d = all_pairs_shortest_paths(g);
  FeatureMatrix out("linf" + std::to_string(dim), n, dim, true);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < dim; ++i) out.at(j, i) = i < n ? static_cast<double>(d(i, j)) : kLinfPad;
  }
  return out;
}

PositionalFeatures feat_pos(const Graph& g, std::size_t dim, std::uint64_t seed,
                            const StressOptions& opts) {
  StressLayout layout = minimize_stress(g, dim, seed, opts);
  FeatureMatrix out("pos" + std::to_string(dim), g.size(), dim, false);
  out.values() = layout.positions;
  return {std::move(out), std::move(layout)};
}

FeatureMatrix regenerate(const RegenSpec& regen, std::size_t n, std::uint64_t seed) {
  const SchemeSpec scheme = SchemeSpec::parse(regen.distribution + ":" + std::to_string(regen.dim));
  if (!scheme.random()) {
    throw Error(Errc::invalid_parameter, "'" + regen.distribution + "' is not a random scheme");
  }
  FeatureMatrix out(scheme.name(), n, scheme.dim, scheme.discrete());
  Rng rng = make_rng(seed);
  switch (scheme.kind) {
    case SchemeKind::rnormal: {
      std::normal_distribution<double> dist(0.0, 1.0);
      for (auto& x : out.values()) x = dist(rng);
      break;
    }
    case SchemeKind::runiform: {
      std::uniform_int_distribution<int> dist(0, 99);
      for (auto& x : out.values()) x = dist(rng);
      break;
    }
    case SchemeKind::rbits: {
      std::bernoulli_distribution dist(0.5);
      for (auto& x : out.values()) x = dist(rng) ? 1.0 : 0.0;
      break;
    }
    default: break;
  }
  out.set_regen({regen.distribution, regen.dim, regen.seed});
  return out;
}

FeatureMatrix feat_random(std::size_t n, const SchemeSpec& scheme, std::uint64_t seed) {
  if (!scheme.random()) {
    throw Error(Errc::invalid_parameter, scheme.name() + " is not a random scheme");
  }
  return regenerate({std::string(to_string(scheme.kind)), scheme.dim, seed}, n, seed);
}

FeatureMatrix feat_ground_truth(std::span<const Point2> coords) {
  FeatureMatrix out("gtpos2", coords.size(), 2, false);
  for (std::size_t v = 0; v < coords.size(); ++v) {
    out.at(v, 0) = coords[v].x;
    out.at(v, 1) = coords[v].y;
  }
  return out;
}

FeatureMatrix concat_features(std::span<const FeatureMatrix> parts) {
  if (parts.empty()) throw Error(Errc::invalid_parameter, "nothing to concatenate");
  if (parts.size() == 1) return parts.front();
  const std::size_t n = parts.front().rows();
  std::size_t dim = 0;
  bool discrete = true;
  std::string name;
  for (const auto& p : parts) {
    if (p.rows() != n) {
      throw Error(Errc::row_count_mismatch, p.scheme() + " has " + std::to_string(p.rows()) +
                                                " rows, expected " + std::to_string(n));
    }
    dim += p.dim();
    discrete = discrete && p.discrete();
    name += (name.empty() ? "" : "+") + p.scheme();
  }
  FeatureMatrix out(name, n, dim, discrete);
  for (std::size_t v = 0; v < n; ++v) {
    std::size_t col = 0;
    for (const auto& p : parts) {
      for (std::size_t k = 0; k < p.dim(); ++k) out.at(v, col++) = p.at(v, k);
    }
  }
  return out;
}

FeatureMatrix compute_features(const Graph& g, const SchemeSpec& scheme, std::uint64_t seed,
                               const std::optional<std::vector<Point2>>& coords) {
  switch (scheme.kind) {
    case SchemeKind::canon: return feat_canon(g, scheme.dim);
    case SchemeKind::linf: return feat_linf(g, scheme.dim);
    case SchemeKind::pos: return feat_pos(g, scheme.dim, seed).features;
    case SchemeKind::rnormal:
    case SchemeKind::runiform:
    case SchemeKind::rbits: return feat_random(g.size(), scheme, seed);
    case SchemeKind::gtpos:
      if (!coords) throw Error(Errc::missing_scheme, "gtpos needs ground-truth coordinates");
      return feat_ground_truth(*coords);
  }
  throw Error(Errc::invalid_parameter, "unknown scheme");
}

}  // namespace featforge
