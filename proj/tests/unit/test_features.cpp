#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "featforge/canonical.hpp"
#include "featforge/error.hpp"
#include "featforge/features.hpp"
#include "featforge/generators.hpp"
#include "oracles.hpp"

using namespace featforge;

namespace {

Errc code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no featforge::Error thrown";
  return Errc::io_error;
}

// Multiset of (one-hot id, sorted neighbor ids): a structural restatement of
// canonical invariance.
std::multiset<std::pair<std::size_t, std::vector<std::size_t>>> canon_structure(const Graph& g,
                                                                               const FeatureMatrix& f) {
  auto id = [&](NodeId v) {
    const auto row = f.row(v);
    return static_cast<std::size_t>(std::find(row.begin(), row.end(), 1.0) - row.begin());
  };
  std::multiset<std::pair<std::size_t, std::vector<std::size_t>>> out;
  for (NodeId v = 0; v < g.size(); ++v) {
    std::vector<std::size_t> nb;
    for (NodeId w : g.neighbors(v)) nb.push_back(id(w));
    std::sort(nb.begin(), nb.end());
    out.emplace(id(v), nb);
  }
  return out;
}

}  // namespace

TEST(SchemeSpec, Parse) {
  EXPECT_EQ(SchemeSpec::parse("canon:20").name(), "canon20");
  EXPECT_EQ(SchemeSpec::parse("canon20").name(), "canon20");
  EXPECT_EQ(SchemeSpec::parse("canon").name(), "canon20");
  EXPECT_EQ(SchemeSpec::parse("pos").name(), "pos2");
  EXPECT_EQ(SchemeSpec::parse("runiform").name(), "runiform1");
  EXPECT_EQ(SchemeSpec::parse("rbits:2").name(), "rbits2");
  EXPECT_THROW(SchemeSpec::parse("runiform:3"), Error);
  EXPECT_THROW(SchemeSpec::parse("gtpos:3"), Error);
  EXPECT_THROW(SchemeSpec::parse("bogus:2"), Error);
  EXPECT_THROW(SchemeSpec::parse("pos:0"), Error);
  EXPECT_THROW(SchemeSpec::parse("pos:x"), Error);
  EXPECT_TRUE(SchemeSpec::parse("rbits").random());
  EXPECT_FALSE(SchemeSpec::parse("pos").discrete());
}

TEST(FeatCanon, OneHotRows) {
  const auto f = feat_canon(oracle::path(2), 4);
  EXPECT_EQ(f.scheme(), "canon4");
  ASSERT_EQ(f.rows(), 2u);
  std::set<std::vector<double>> rows{{f.row(0).begin(), f.row(0).end()}, {f.row(1).begin(), f.row(1).end()}};
  EXPECT_EQ(rows, (std::set<std::vector<double>>{{1, 0, 0, 0}, {0, 1, 0, 0}}));
  EXPECT_EQ(code_of([] { feat_canon(oracle::path(21), 20); }), Errc::dim_too_small);
}

TEST(FeatCanon, StructureInvariantUnderPermutation) {
  const Graph c4 = oracle::cycle(4);
  const Graph p = c4.permuted(std::vector<NodeId>{2, 0, 3, 1});
  EXPECT_EQ(canon_structure(c4, feat_canon(c4, 4)), canon_structure(p, feat_canon(p, 4)));
  std::mt19937_64 rng(21);
  for (int t = 0; t < 20; ++t) {
    const Graph g = gen_regular(20, 3, rng());
    const Graph h = g.permuted(oracle::random_permutation(20, rng));
    ASSERT_EQ(canon_structure(g, feat_canon(g, 20)), canon_structure(h, feat_canon(h, 20)));
  }
}

TEST(FeatLinf, Fixtures) {
  const auto p3 = feat_linf(oracle::path(3), 3);
  EXPECT_EQ(p3.values(), (std::vector<double>{0, 1, 2, 1, 0, 1, 2, 1, 0}));
  const auto k4 = feat_linf(oracle::complete(4), 6);
  for (std::size_t v = 0; v < 4; ++v) {
    std::vector<double> row(k4.row(v).begin(), k4.row(v).end());
    std::sort(row.begin(), row.end());
    EXPECT_EQ(row, (std::vector<double>{-1, -1, 0, 1, 1, 1}));
  }
  EXPECT_EQ(code_of([] { feat_linf(oracle::path(5), 4); }), Errc::dim_too_small);
}

TEST(FeatLinf, IsometryOnRandomGraphs) {
  std::mt19937_64 rng(22);
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = 2 + rng() % 19;
    const Graph g = oracle::random_connected(n, 0.25, rng);
    const auto f = feat_linf(g, n);
    const auto d = oracle::floyd_warshall(g);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        std::int64_t m = 0;
        for (std::size_t k = 0; k < n; ++k) {
          m = std::max<std::int64_t>(m, std::abs(static_cast<std::int64_t>(f.at(i, k)) - static_cast<std::int64_t>(f.at(j, k))));
        }
        ASSERT_EQ(m, d[i][j]);
      }
  }
}

TEST(FeatRandom, RangesAndDeterminism) {
  const auto bits = feat_random(20, SchemeSpec::parse("rbits:2"), 5);
  EXPECT_EQ(bits.rows(), 20u);
  EXPECT_EQ(bits.dim(), 2u);
  for (double x : bits.values()) EXPECT_TRUE(x == 0.0 || x == 1.0);
  const auto uni = feat_random(20, SchemeSpec::parse("runiform"), 5);
  EXPECT_EQ(uni.dim(), 1u);
  for (double x : uni.values()) {
    EXPECT_EQ(x, std::floor(x));
    EXPECT_GE(x, 0);
    EXPECT_LE(x, 99);
  }
  EXPECT_EQ(feat_random(20, SchemeSpec::parse("rnormal:3"), 9), feat_random(20, SchemeSpec::parse("rnormal:3"), 9));
  EXPECT_NE(feat_random(20, SchemeSpec::parse("rnormal:3"), 9), feat_random(20, SchemeSpec::parse("rnormal:3"), 10));
  ASSERT_TRUE(bits.regen().has_value());
  EXPECT_EQ(bits.regen()->distribution, "rbits");
  EXPECT_EQ(bits.regen()->dim, 2u);
  EXPECT_EQ(regenerate(*bits.regen(), 20, 5), bits);
  EXPECT_THROW(feat_random(20, SchemeSpec::parse("pos:2"), 1), Error);
}

TEST(FeatRandom, Moments) {
  // Bernoulli(0.5) cell means over 10^4 draws.
  std::vector<double> sums(40, 0.0);
  for (std::uint64_t s = 0; s < 10000; ++s) {
    const auto f = feat_random(20, SchemeSpec::parse("rbits:2"), s);
    for (std::size_t i = 0; i < 40; ++i) sums[i] += f.values()[i];
  }
  for (double s : sums) EXPECT_NEAR(s / 10000, 0.5, 0.02);

  const auto normal = feat_random(100000, SchemeSpec::parse("rnormal:1"), 77);
  double mean = 0, sq = 0;
  for (double x : normal.values()) mean += x;
  mean /= 100000;
  for (double x : normal.values()) sq += (x - mean) * (x - mean);
  EXPECT_NEAR(mean, 0.0, 0.02);
  EXPECT_NEAR(std::sqrt(sq / 99999), 1.0, 0.02);
}

TEST(FeatConcat, Shapes) {
  const Graph g = oracle::cycle(5);
  const auto pos = feat_pos(g, 2, 1).features;
  const auto bits = feat_random(5, SchemeSpec::parse("rbits:1"), 1);
  const std::vector<FeatureMatrix> parts{pos, bits};
  const auto cat = concat_features(parts);
  EXPECT_EQ(cat.dim(), 3u);
  EXPECT_EQ(cat.scheme(), "pos2+rbits1");
  EXPECT_FALSE(cat.discrete());
  for (std::size_t v = 0; v < 5; ++v) {
    EXPECT_EQ(cat.at(v, 0), pos.at(v, 0));
    EXPECT_EQ(cat.at(v, 2), bits.at(v, 0));
  }
  EXPECT_EQ(concat_features(std::vector<FeatureMatrix>{bits}), bits);
  const std::vector<FeatureMatrix> bad{feat_random(4, SchemeSpec::parse("rbits:1"), 1), bits};
  EXPECT_EQ(code_of([&] { concat_features(bad); }), Errc::row_count_mismatch);
}

TEST(FeatGroundTruth, CopiesCoordinates) {
  const auto gg = gen_unit_disk(20, 0.5, 3);
  const auto f = compute_features(gg.graph, SchemeSpec::parse("gtpos"), 0, gg.coords);
  EXPECT_EQ(f.scheme(), "gtpos2");
  EXPECT_EQ(f.at(7, 1), gg.coords[7].y);
  EXPECT_EQ(code_of([&] { compute_features(gg.graph, SchemeSpec::parse("gtpos"), 0); }), Errc::missing_scheme);
}
