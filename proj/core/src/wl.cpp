#include "featforge/wl.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "featforge/auroc.hpp"
#include "featforge/error.hpp"

namespace featforge {
namespace {

constexpr std::int64_t kInitialTag = 0;
constexpr std::int64_t kRefineTag = 1;
constexpr double kRealScale = 1e6;

std::int64_t feature_key(double x, bool discrete) {
  if (discrete) return std::bit_cast<std::int64_t>(x == 0.0 ? 0.0 : x);
  return std::llround(x * kRealScale);
}

std::size_t distinct(std::span<const Color> colors) {
  std::vector<Color> sorted(colors.begin(), colors.end());
  std::sort(sorted.begin(), sorted.end());
  return static_cast<std::size_t>(std::unique(sorted.begin(), sorted.end()) - sorted.begin());
}

std::map<Color, std::size_t> histogram_of(std::span<const Color> colors) {
  std::map<Color, std::size_t> h;
  for (Color c : colors) ++h[c];
  return h;
}

void check_rows(const Graph& g, const FeatureMatrix* f) {
  if (f && f->rows() != g.size()) {
    throw Error(Errc::row_count_mismatch, f->scheme() + " has " + std::to_string(f->rows()) +
                                              " rows for a graph on " + std::to_string(g.size()) +
                                              " nodes");
  }
}

}  // namespace

Color ColorUniverse::intern(const std::vector<std::int64_t>& key) {
  std::lock_guard lock(mu_);
  auto [it, inserted] = ids_.try_emplace(key, static_cast<Color>(ids_.size()));
  return it->second;
}

std::size_t ColorUniverse::size() const {
  std::lock_guard lock(mu_);
  return ids_.size();
}

std::vector<Color> initial_colors(const Graph& g, const FeatureMatrix* init, ColorUniverse& universe) {
  check_rows(g, init);
  std::vector<Color> colors(g.size());
  std::vector<std::int64_t> key;
  for (NodeId v = 0; v < g.size(); ++v) {
    key.assign(1, kInitialTag);
    if (init) {
      for (double x : init->row(v)) key.push_back(feature_key(x, init->discrete()));
    }
    colors[v] = universe.intern(key);
  }
  return colors;
}

std::vector<Color> refine_round(const Graph& g, std::span<const Color> colors, ColorUniverse& universe) {
  std::vector<Color> next(g.size());
  std::vector<std::int64_t> key;
  for (NodeId v = 0; v < g.size(); ++v) {
    key.assign({kRefineTag, static_cast<std::int64_t>(colors[v])});
    for (NodeId w : g.neighbors(v)) key.push_back(colors[w]);
    std::sort(key.begin() + 2, key.end());
    next[v] = universe.intern(key);
  }
  return next;
}

Coloring wl_refine(const Graph& g, const FeatureMatrix* init, ColorUniverse& universe,
                   std::optional<std::size_t> exact_rounds) {
  Coloring out;
  out.colors = initial_colors(g, init, universe);
  std::size_t classes = distinct(out.colors);
  while (true) {
    if (exact_rounds && out.rounds == *exact_rounds) break;
    out.colors = refine_round(g, out.colors, universe);
    ++out.rounds;
    const std::size_t now = distinct(out.colors);
    if (!exact_rounds && now == classes) break;
    classes = now;
  }
  out.histogram = histogram_of(out.colors);
  return out;
}

Coloring wl_refine(const Graph& g, const FeatureMatrix* init) {
  ColorUniverse universe;
  return wl_refine(g, init, universe);
}

WlVerdict wl_distinguish(const Graph& g1, const Graph& g2, const FeatureMatrix* f1,
                         const FeatureMatrix* f2) {
  ColorUniverse universe;
  auto c1 = initial_colors(g1, f1, universe);
  auto c2 = initial_colors(g2, f2, universe);
  std::size_t k1 = distinct(c1), k2 = distinct(c2);

  WlVerdict verdict;
  auto compare = [&] {
    if (!verdict.first_round && histogram_of(c1) != histogram_of(c2)) {
      verdict.first_round = verdict.rounds;
    }
  };
  compare();
  while (!verdict.first_round) {
    c1 = refine_round(g1, c1, universe);
    c2 = refine_round(g2, c2, universe);
    ++verdict.rounds;
    compare();
    const std::size_t n1 = distinct(c1), n2 = distinct(c2);
    if (n1 == k1 && n2 == k2) break;
    k1 = n1;
    k2 = n2;
  }
  verdict.distinguished = verdict.first_round.has_value();
  return verdict;
}

WlVerdict wl_distinguish(const Graph& g1, const Graph& g2, const SchemeSpec& scheme, std::uint64_t seed) {
  const FeatureMatrix f1 = compute_features(g1, scheme, seed);
  const FeatureMatrix f2 = compute_features(g2, scheme, seed);
  return wl_distinguish(g1, g2, &f1, &f2);
}

WlClassifier::WlClassifier(std::size_t num_classes)
    : num_classes_(num_classes), uniform_(num_classes, 1.0 / static_cast<double>(num_classes)) {}

void WlClassifier::add(Color color, int label) {
  auto [it, inserted] = table_.try_emplace(color, std::vector<double>(num_classes_, 0.0));
  it->second[static_cast<std::size_t>(label)] += 1.0;
}

void WlClassifier::finalize() {
  for (auto& [color, counts] : table_) {
    double total = 0.0;
    for (double c : counts) total += c;
    for (double& c : counts) c /= total;
  }
}

std::span<const double> WlClassifier::predict(Color color) const {
  auto it = table_.find(color);
  return it == table_.end() ? std::span<const double>(uniform_) : std::span<const double>(it->second);
}

double wl_auroc(std::span<const LabeledGraph> train, std::span<const LabeledGraph> test) {
  if (test.empty()) throw Error(Errc::degenerate_labels, "empty test split");
  const TaskSpec task = test.front().labels.task;
  int max_label = 0;
  auto scan = [&](std::span<const LabeledGraph> split) {
    for (const auto& lg : split) {
      if (!(lg.labels.task == task)) {
        throw Error(Errc::invalid_parameter, "mixed tasks in one dataset");
      }
      if (lg.labels.values.size() != lg.graph.size()) {
        throw Error(Errc::row_count_mismatch, "labels do not match graph size");
      }
      for (int y : lg.labels.values) max_label = std::max(max_label, y);
    }
  };
  scan(train);
  scan(test);
  const std::size_t num_classes = task.binary() ? 2 : static_cast<std::size_t>(max_label) + 1;

  // Align every graph on one round count so colors are comparable.
  std::size_t rounds = 0;
  for (auto split : {train, test}) {
    for (const auto& lg : split) {
      rounds = std::max(rounds, wl_refine(lg.graph, lg.features ? &*lg.features : nullptr).rounds);
    }
  }
  ColorUniverse universe;
  auto colors_of = [&](const LabeledGraph& lg) {
    return wl_refine(lg.graph, lg.features ? &*lg.features : nullptr, universe, rounds).colors;
  };

  WlClassifier clf(num_classes);
  for (const auto& lg : train) {
    const auto colors = colors_of(lg);
    for (std::size_t v = 0; v < colors.size(); ++v) clf.add(colors[v], lg.labels.values[v]);
  }
  clf.finalize();

  std::vector<std::vector<double>> scores(num_classes);
  std::vector<int> labels;
  for (const auto& lg : test) {
    const auto colors = colors_of(lg);
    for (std::size_t v = 0; v < colors.size(); ++v) {
      const auto probs = clf.predict(colors[v]);
      for (std::size_t c = 0; c < num_classes; ++c) scores[c].push_back(probs[c]);
      labels.push_back(lg.labels.values[v]);
    }
  }

  if (task.binary()) return auroc(scores[1], labels);

  std::vector<std::size_t> support(num_classes, 0);
  for (int y : labels) ++support[static_cast<std::size_t>(y)];
  const auto present = std::count_if(support.begin(), support.end(), [](std::size_t s) { return s > 0; });
  if (present < 2) throw Error(Errc::degenerate_labels, "test split has a single class");
  double weighted = 0.0;
  std::vector<int> one_vs_rest(labels.size());
  for (std::size_t c = 0; c < num_classes; ++c) {
    if (support[c] == 0) continue;
    for (std::size_t i = 0; i < labels.size(); ++i) one_vs_rest[i] = labels[i] == static_cast<int>(c) ? 1 : 0;
    weighted += static_cast<double>(support[c]) * auroc(scores[c], one_vs_rest);
  }
  return weighted / static_cast<double>(labels.size());
}

}  // namespace featforge
