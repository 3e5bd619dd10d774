#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "featforge/dataset.hpp"
#include "featforge/error.hpp"
#include "featforge/generators.hpp"
#include "featforge/labelers.hpp"

using namespace featforge;
namespace fs = std::filesystem;

namespace {

fs::path temp_file(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "featforge_tests";
  fs::create_directories(dir);
  return dir / name;
}

DatasetRecord make_record(std::size_t i, Family family) {
  GenSpec spec;
  spec.family = family;
  spec.seed = i;
  if (family == Family::regular) spec.degree = 3;
  if (family == Family::erdos_renyi) spec.p = 0.3;
  if (family == Family::unit_disk) spec.radius = 0.45;
  const Sample s = generate(spec);
  DatasetRecord r;
  r.id = "rec-" + std::to_string(i);
  r.n = s.graph.size();
  r.edges = s.graph.edges();
  r.task = i % 3 == 0 ? TaskSpec::lcc() : TaskSpec::cycle(4);
  r.labels = label_nodes(s.graph, r.task).values;
  r.split = i % 2 ? "test" : "train";
  r.coords = s.coords;
  r.add_feature(compute_features(s.graph, SchemeSpec::parse("canon:20"), i));
  r.add_feature(compute_features(s.graph, SchemeSpec::parse("pos:2"), i));
  r.add_feature(compute_features(s.graph, SchemeSpec::parse("rnormal:2"), i));
  if (s.coords) r.add_feature(compute_features(s.graph, SchemeSpec::parse("gtpos"), i, s.coords));
  return r;
}

std::string replace_once(std::string s, const std::string& from, const std::string& to) {
  const auto at = s.find(from);
  EXPECT_NE(at, std::string::npos) << from;
  return s.replace(at, from.size(), to);
}

void expect_schema_error(const std::string& line, const std::string& fragment = "") {
  try {
    parse_json_line(line, 17);
    ADD_FAILURE() << "accepted: " << line;
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::schema_error);
    const std::string what = e.what();
    EXPECT_NE(what.find("line 17"), std::string::npos) << what;
    if (!fragment.empty()) {
      EXPECT_NE(what.find(fragment), std::string::npos) << what;
    }
  }
}

}  // namespace

TEST(Dataset, RoundTripHundredRecords) {
  std::vector<DatasetRecord> recs;
  for (std::size_t i = 0; i < 100; ++i) recs.push_back(make_record(i, static_cast<Family>(i % 3)));
  const auto path = temp_file("roundtrip.jsonl");
  write_dataset(recs, path);
  const auto back = read_dataset(path);
  ASSERT_EQ(back.size(), recs.size());
  for (std::size_t i = 0; i < recs.size(); ++i) {
    const auto& a = recs[i];
    const auto& b = back[i];
    EXPECT_EQ(a.id, b.id);
    EXPECT_EQ(a.edges, b.edges);
    EXPECT_EQ(a.labels, b.labels);
    EXPECT_EQ(a.task, b.task);
    EXPECT_EQ(a.split, b.split);
    ASSERT_EQ(a.features.size(), b.features.size());
    for (const auto& [name, f] : a.features) {
      const auto& g = b.features.at(name);
      ASSERT_EQ(f.dim(), g.dim());
      EXPECT_EQ(f.discrete(), g.discrete());
      for (std::size_t k = 0; k < f.values().size(); ++k) {
        EXPECT_EQ(round_to_digits(f.values()[k]), g.values()[k]);
      }
      EXPECT_EQ(f.regen(), g.regen());
    }
    EXPECT_EQ(a.regen.size(), b.regen.size());
    EXPECT_EQ(a.coords.has_value(), b.coords.has_value());
    // Second trip is byte-exact: values already sit at 9 digits.
    EXPECT_EQ(to_json_line(b), to_json_line(parse_json_line(to_json_line(b), 1)));
  }
}

TEST(Dataset, FieldOrder) {
  const std::string line = to_json_line(make_record(0, Family::unit_disk));
  std::size_t last = 0;
  for (const char* key : {"\"id\"", "\"n\"", "\"edges\"", "\"labels\"", "\"task\"", "\"split\"", "\"features\"",
                          "\"regen\"", "\"coords\""}) {
    const auto at = line.find(key);
    ASSERT_NE(at, std::string::npos) << key;
    EXPECT_GT(at, last == 0 ? 0 : last);
    last = at;
  }
}

TEST(Dataset, NineSignificantDigits) {
  EXPECT_EQ(round_to_digits(0.123456789123), 0.123456789);
  EXPECT_EQ(round_to_digits(123456.7891234), 123456.789);
  EXPECT_EQ(round_to_digits(-1.0), -1.0);
}

TEST(Dataset, EmptyFile) {
  const auto path = temp_file("empty.jsonl");
  std::ofstream(path).close();
  EXPECT_TRUE(read_dataset(path).empty());
}

TEST(Dataset, MissingFileIsIoError) {
  try {
    read_dataset(temp_file("does-not-exist.jsonl"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::io_error);
  }
}

TEST(Dataset, ReportsLineNumber) {
  const auto path = temp_file("bad.jsonl");
  {
    std::ofstream out(path);
    out << to_json_line(make_record(1, Family::regular)) << "\n\n";
    out << replace_once(to_json_line(make_record(2, Family::regular)), "\"labels\":[", "\"labels\":[0,") << "\n";
  }
  try {
    read_dataset(path);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::schema_error);
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
  }
}

TEST(Dataset, SchemaErrors) {
  const std::string good = to_json_line(make_record(1, Family::regular));
  EXPECT_NO_THROW(parse_json_line(good, 1));
  expect_schema_error("not json");
  expect_schema_error("[1,2]");
  expect_schema_error(replace_once(good, "\"id\"", "\"extra\":1,\"id\""), "unknown field");
  expect_schema_error(replace_once(good, "\"split\":\"test\",", ""), "missing field");
  expect_schema_error(replace_once(good, "\"labels\":[", "\"labels\":[1,"), "labels");
  expect_schema_error(replace_once(good, "\"split\":\"test\"", "\"split\":\"val\""), "split");
  expect_schema_error(replace_once(good, "\"edges\":[", "\"edges\":[[1,0],"), "normalized");
  expect_schema_error(replace_once(good, "\"n\":20", "\"n\":\"20\""), "type");
  expect_schema_error(replace_once(good, "\"canon20\":[", "\"canon20\":[[1],"), "rows");
  expect_schema_error(replace_once(good, "\"canon20\"", "\"mystery3\""), "scheme");
  expect_schema_error(replace_once(good, "\"kind\":\"cycle\"", "\"kind\":\"star\""), "task");
  expect_schema_error(replace_once(good, "\"labels\":[", "\"labels\":[2,"));
  const std::string dup = replace_once(good, "\"edges\":[", "\"edges\":[[0,1],[0,1],");
  expect_schema_error(dup);
}

TEST(Dataset, CombinedFeatureLookup) {
  const auto r = make_record(4, Family::regular);
  const auto f = r.feature("pos2+canon20");
  EXPECT_EQ(f.dim(), 22u);
  EXPECT_EQ(f.scheme(), "pos2+canon20");
  EXPECT_THROW(r.feature("linf20"), Error);
  EXPECT_FALSE(r.labeled("none").features.has_value());
  EXPECT_TRUE(r.labeled("canon20").features.has_value());
}

TEST(Dataset, RegenTracksRandomFeatures) {
  const auto r = make_record(5, Family::regular);
  ASSERT_EQ(r.regen.count("rnormal2"), 1u);
  EXPECT_EQ(r.regen.at("rnormal2").distribution, "rnormal");
  EXPECT_EQ(r.regen.count("canon20"), 0u);
  const auto redraw = regenerate(r.regen.at("rnormal2"), r.n, r.regen.at("rnormal2").seed);
  EXPECT_EQ(redraw, r.features.at("rnormal2"));
}
