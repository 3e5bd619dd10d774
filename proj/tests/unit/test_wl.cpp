#include <gtest/gtest.h>

#include <map>
#include <set>

#include "featforge/error.hpp"
#include "featforge/features.hpp"
#include "featforge/generators.hpp"
#include "featforge/labelers.hpp"
#include "featforge/wl.hpp"
#include "oracles.hpp"

using namespace featforge;

namespace {

// True when every class of `fine` lies inside one class of `coarse`.
bool refines(const std::vector<Color>& fine, const std::vector<Color>& coarse) {
  std::map<Color, Color> parent;
  for (std::size_t v = 0; v < fine.size(); ++v) {
    auto [it, fresh] = parent.emplace(fine[v], coarse[v]);
    if (!fresh && it->second != coarse[v]) return false;
  }
  return true;
}

LabeledGraph labeled(const Graph& g, const TaskSpec& task, std::optional<FeatureMatrix> f = std::nullopt) {
  return {g, label_nodes(g, task), std::move(f)};
}

}  // namespace

TEST(WlRefine, RegularGraphsStayMonochrome) {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto c = wl_refine(gen_regular(20, 3 + s % 3, s));
    EXPECT_EQ(c.num_classes(), 1u);
    EXPECT_EQ(c.rounds, 1u);
  }
}

TEST(WlRefine, PathP3) {
  const auto c = wl_refine(oracle::path(3));
  EXPECT_EQ(c.num_classes(), 2u);
  EXPECT_EQ(c.colors[0], c.colors[2]);
  EXPECT_NE(c.colors[0], c.colors[1]);
}

TEST(WlRefine, WlTwinHistogramsMatch) {
  ColorUniverse u;
  const auto a = wl_refine(oracle::joined_triangles(), nullptr, u);
  const auto b = wl_refine(oracle::ladder(), nullptr, u, a.rounds);
  EXPECT_EQ(a.histogram, b.histogram);
}

TEST(WlRefine, RefinementChainStabilizesWithinN) {
  std::mt19937_64 rng(41);
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = 2 + rng() % 25;
    const Graph g = oracle::random_connected(n, 0.2, rng);
    ColorUniverse u;
    auto colors = initial_colors(g, nullptr, u);
    std::size_t rounds = 0;
    while (true) {
      auto next = refine_round(g, colors, u);
      ++rounds;
      ASSERT_TRUE(refines(next, colors));
      const bool stable = refines(colors, next);
      colors = std::move(next);
      if (stable) break;
    }
    ASSERT_LE(rounds, n);
    const auto c = wl_refine(g);
    ASSERT_EQ(c.rounds, rounds);
    ASSERT_TRUE(refines(c.colors, colors) && refines(colors, c.colors));
  }
}

TEST(WlRefine, FeatureSeededColorsRefineInitialPartition) {
  const Graph g = gen_regular(20, 3, 2);
  const auto f = feat_random(20, SchemeSpec::parse("rbits:2"), 3);
  ColorUniverse u;
  const auto init = initial_colors(g, &f, u);
  const auto c = wl_refine(g, &f, u);
  EXPECT_TRUE(refines(c.colors, init));
  EXPECT_GT(c.num_classes(), 1u);
  const auto short_rows = feat_random(5, SchemeSpec::parse("rbits:2"), 3);
  EXPECT_THROW(wl_refine(g, &short_rows), Error);
}

TEST(WlDistinguish, WlTwins) {
  const Graph a = oracle::joined_triangles(), b = oracle::ladder();
  EXPECT_FALSE(wl_distinguish(a, b).distinguished);
  const auto canon = wl_distinguish(a, b, SchemeSpec::parse("canon:20"), 0);
  EXPECT_TRUE(canon.distinguished);
  ASSERT_TRUE(canon.first_round.has_value());
  EXPECT_LE(*canon.first_round, 2u);
  EXPECT_TRUE(wl_distinguish(a, b, SchemeSpec::parse("linf:6"), 0).distinguished);
}

TEST(WlDistinguish, WlTwinsLinfOracle) {
  // Sorted distance-row multisets differ, so l-inf seeding must separate.
  auto rows = [](const Graph& g) {
    const auto d = oracle::floyd_warshall(g);
    std::multiset<std::vector<std::int64_t>> out;
    for (auto row : d) {
      std::sort(row.begin(), row.end());
      out.insert(row);
    }
    return out;
  };
  EXPECT_NE(rows(oracle::joined_triangles()), rows(oracle::ladder()));
}

TEST(WlDistinguish, DegreeHistogramsDiffer) {
  const auto v = wl_distinguish(oracle::complete(4), oracle::cycle(4));
  EXPECT_TRUE(v.distinguished);
  EXPECT_EQ(v.first_round, 1u);
}

TEST(WlDistinguish, SoundUnderPermutation) {
  std::mt19937_64 rng(42);
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 3 + rng() % 15;
    const Graph g = oracle::random_connected(n, 0.3, rng);
    const Graph p = g.permuted(oracle::random_permutation(n, rng));
    ASSERT_FALSE(wl_distinguish(g, p).distinguished);
    ASSERT_FALSE(wl_distinguish(g, p, SchemeSpec{SchemeKind::canon, 20}, 0).distinguished);
  }
}

TEST(WlClassifier, UniformForUnseen) {
  WlClassifier clf(3);
  clf.add(7, 0);
  clf.add(7, 2);
  clf.add(7, 2);
  clf.finalize();
  const auto p = clf.predict(7);
  EXPECT_DOUBLE_EQ(p[0], 1.0 / 3);
  EXPECT_DOUBLE_EQ(p[2], 2.0 / 3);
  for (double x : clf.predict(99)) EXPECT_DOUBLE_EQ(x, 1.0 / 3);
}

TEST(WlAuroc, RegularDatasetIsExactlyHalf) {
  std::vector<LabeledGraph> train, test;
  for (std::uint64_t s = 0; s < 40; ++s) (s % 2 ? test : train).push_back(labeled(gen_regular(20, 4, s), TaskSpec::cycle(3)));
  EXPECT_EQ(wl_auroc(train, test), 0.5);
}

TEST(WlAuroc, SingletonColorsOnTrainingGraphScorePerfectly) {
  // Search for a graph whose C3 and LCC labels are both mixed.
  for (std::uint64_t s = 0;; ++s) {
    const Graph g = gen_regular(20, 4, s);
    const auto lcc_values = label_lcc(g).values;
    const double c3 = label_cycles(g, 3).positive_fraction();
    if (c3 == 0 || c3 == 1 || std::set<int>(lcc_values.begin(), lcc_values.end()).size() < 3) continue;
    const auto canon = feat_canon(g, 20);
    const std::vector<LabeledGraph> data{labeled(g, TaskSpec::cycle(3), canon)};
    EXPECT_EQ(wl_auroc(data, data), 1.0);
    const std::vector<LabeledGraph> lcc{labeled(g, TaskSpec::lcc(), canon)};
    EXPECT_EQ(wl_auroc(lcc, lcc), 1.0);
    break;
  }
}

TEST(WlAuroc, DegenerateTestSplit) {
  const std::vector<LabeledGraph> data{labeled(oracle::cycle(6), TaskSpec::cycle(3))};
  EXPECT_THROW(wl_auroc(data, data), Error);
}

TEST(WlAuroc, NonRegularGraphsBeatChance) {
  // On non-regular graphs plain WL colors carry label information.
  const Graph a = oracle::joined_triangles();
  const Graph b = Graph::build(6, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {0, 2}});
  std::vector<LabeledGraph> train{labeled(a, TaskSpec::cycle(3)), labeled(b, TaskSpec::cycle(3))};
  EXPECT_GT(wl_auroc(train, train), 0.5);
}
