#include "featforge/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>

#include "featforge/error.hpp"
#include "json.hpp"

namespace featforge {
namespace {

using Json = nlohmann::ordered_json;

constexpr std::string_view kFieldOrder[] = {"id",    "n",        "edges", "labels", "task",
                                            "split", "features", "regen", "coords"};

[[noreturn]] void schema_error(std::size_t line_no, const std::string& what) {
  throw Error(Errc::schema_error, "line " + std::to_string(line_no) + ": " + what);
}

Json task_to_json(const TaskSpec& t) {
  Json j;
  switch (t.kind) {
    case TaskKind::cycle: j["kind"] = "cycle"; break;
    case TaskKind::clique: j["kind"] = "clique"; break;
    case TaskKind::lcc: j["kind"] = "lcc"; break;
  }
  if (t.kind != TaskKind::lcc) j["size"] = t.size;
  return j;
}

TaskSpec task_from_json(const Json& j, std::size_t line_no) {
  if (!j.is_object() || !j.contains("kind")) schema_error(line_no, "task must be an object with 'kind'");
  for (const auto& [key, value] : j.items()) {
    if (key != "kind" && key != "size") schema_error(line_no, "unknown task field '" + key + "'");
  }
  const std::string kind = j.at("kind").get<std::string>();
  TaskSpec t;
  if (kind == "lcc") return TaskSpec::lcc();
  if (kind != "cycle" && kind != "clique") schema_error(line_no, "unknown task kind '" + kind + "'");
  if (!j.contains("size")) schema_error(line_no, "task '" + kind + "' needs a size");
  t = kind == "cycle" ? TaskSpec::cycle(j.at("size").get<std::size_t>())
                      : TaskSpec::clique(j.at("size").get<std::size_t>());
  try {
    t.validate();
  } catch (const Error& e) {
    schema_error(line_no, e.what());
  }
  return t;
}

bool scheme_is_discrete(std::string_view name) {
  bool discrete = true;
  std::size_t start = 0;
  while (start <= name.size()) {
    const auto plus = name.find('+', start);
    const auto part = name.substr(start, plus == std::string_view::npos ? std::string_view::npos : plus - start);
    discrete = discrete && SchemeSpec::parse(part).discrete();
    if (plus == std::string_view::npos) break;
    start = plus + 1;
  }
  return discrete;
}

}  // namespace

double round_to_digits(double x, int digits) {
  if (!std::isfinite(x)) return x;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return std::strtod(buf, nullptr);
}

Graph DatasetRecord::graph() const { return Graph::build(n, edges); }

NodeLabels DatasetRecord::node_labels() const {
  NodeLabels out;
  out.values = labels;
  out.task = task;
  if (task.binary()) {
    out.num_classes = 2;
  } else {
    const int max_label = labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end());
    out.num_classes = static_cast<std::size_t>(max_label) + 1;
  }
  return out;
}

FeatureMatrix DatasetRecord::feature(std::string_view scheme) const {
  if (auto it = features.find(std::string(scheme)); it != features.end()) return it->second;
  std::vector<FeatureMatrix> parts;
  std::size_t start = 0;
  while (true) {
    const auto plus = scheme.find('+', start);
    const std::string part(scheme.substr(start, plus == std::string_view::npos ? std::string_view::npos : plus - start));
    auto it = features.find(part);
    if (it == features.end()) {
      throw Error(Errc::missing_scheme, "record " + id + " has no feature '" + part + "'");
    }
    parts.push_back(it->second);
    if (plus == std::string_view::npos) break;
    start = plus + 1;
  }
  return concat_features(parts);
}

LabeledGraph DatasetRecord::labeled(std::optional<std::string_view> scheme) const {
  LabeledGraph lg{graph(), node_labels(), std::nullopt};
  if (scheme && *scheme != "none") lg.features = feature(*scheme);
  return lg;
}

void DatasetRecord::add_feature(FeatureMatrix f) {
  const std::string name = f.scheme();
  if (f.regen()) {
    regen[name] = *f.regen();
  } else {
    regen.erase(name);
  }
  features.insert_or_assign(name, std::move(f));
}

std::string to_json_line(const DatasetRecord& r) {
  Json j;
  j["id"] = r.id;
  j["n"] = r.n;
  Json edges = Json::array();
  for (const auto& e : r.edges) edges.push_back({e.u, e.v});
  j["edges"] = std::move(edges);
  j["labels"] = r.labels;
  j["task"] = task_to_json(r.task);
  j["split"] = r.split;
  Json feats = Json::object();
  for (const auto& [name, f] : r.features) {
    Json rows = Json::array();
    for (std::size_t v = 0; v < f.rows(); ++v) {
      Json row = Json::array();
      for (double x : f.row(v)) row.push_back(round_to_digits(x));
      rows.push_back(std::move(row));
    }
    feats[name] = std::move(rows);
  }
  j["features"] = std::move(feats);
  Json regen = Json::object();
  for (const auto& [name, spec] : r.regen) {
    regen[name] = {{"distribution", spec.distribution}, {"dim", spec.dim}, {"seed", spec.seed}};
  }
  j["regen"] = std::move(regen);
  if (r.coords) {
    Json coords = Json::array();
    for (const auto& p : *r.coords) coords.push_back({round_to_digits(p.x), round_to_digits(p.y)});
    j["coords"] = std::move(coords);
  } else {
    j["coords"] = nullptr;
  }
  return j.dump();
}

DatasetRecord parse_json_line(std::string_view line, std::size_t line_no) {
  Json j;
  try {
    j = Json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    schema_error(line_no, std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) schema_error(line_no, "record must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (std::find(std::begin(kFieldOrder), std::end(kFieldOrder), key) == std::end(kFieldOrder)) {
      schema_error(line_no, "unknown field '" + key + "'");
    }
  }
  for (auto field : kFieldOrder) {
    if (!j.contains(field)) schema_error(line_no, "missing field '" + std::string(field) + "'");
  }

  DatasetRecord r;
  try {
    r.id = j.at("id").get<std::string>();
    r.n = j.at("n").get<std::size_t>();
    std::set<Edge> seen;
    for (const auto& e : j.at("edges")) {
      if (!e.is_array() || e.size() != 2) schema_error(line_no, "edge must be a [u, v] pair");
      const Edge edge{e[0].get<NodeId>(), e[1].get<NodeId>()};
      if (edge.u >= edge.v || edge.v >= r.n) {
        schema_error(line_no, "edge [" + std::to_string(edge.u) + "," + std::to_string(edge.v) +
                                  "] is not normalized (u < v < n)");
      }
      if (!seen.insert(edge).second) schema_error(line_no, "duplicate edge");
      r.edges.push_back(edge);
    }
    r.labels = j.at("labels").get<std::vector<int>>();
    if (r.labels.size() != r.n) {
      schema_error(line_no, "labels has length " + std::to_string(r.labels.size()) + ", expected n=" +
                                std::to_string(r.n));
    }
    r.task = task_from_json(j.at("task"), line_no);
    for (int y : r.labels) {
      if (y < 0 || (r.task.binary() && y > 1)) schema_error(line_no, "label out of range for task");
    }
    r.split = j.at("split").get<std::string>();
    if (r.split != "train" && r.split != "test") schema_error(line_no, "split must be 'train' or 'test'");

    const auto& feats = j.at("features");
    if (!feats.is_object()) schema_error(line_no, "features must be an object");
    for (const auto& [name, rows] : feats.items()) {
      if (!rows.is_array() || rows.size() != r.n) {
        schema_error(line_no, "feature '" + name + "' must have n=" + std::to_string(r.n) + " rows");
      }
      const std::size_t dim = r.n == 0 ? 0 : rows[0].size();
      bool discrete = true;
      try {
        discrete = scheme_is_discrete(name);
      } catch (const Error&) {
        schema_error(line_no, "unknown feature scheme '" + name + "'");
      }
      FeatureMatrix f(name, r.n, dim, discrete);
      for (std::size_t v = 0; v < r.n; ++v) {
        if (!rows[v].is_array() || rows[v].size() != dim) {
          schema_error(line_no, "feature '" + name + "' has ragged rows");
        }
        for (std::size_t k = 0; k < dim; ++k) f.at(v, k) = rows[v][k].get<double>();
      }
      r.features.emplace(name, std::move(f));
    }
    const auto& regen = j.at("regen");
    if (!regen.is_object()) schema_error(line_no, "regen must be an object");
    for (const auto& [name, spec] : regen.items()) {
      auto it = r.features.find(name);
      if (it == r.features.end()) schema_error(line_no, "regen for absent feature '" + name + "'");
      RegenSpec rs{spec.at("distribution").get<std::string>(), spec.at("dim").get<std::size_t>(),
                   spec.at("seed").get<std::uint64_t>()};
      it->second.set_regen(rs);
      r.regen.emplace(name, std::move(rs));
    }
    const auto& coords = j.at("coords");
    if (!coords.is_null()) {
      if (!coords.is_array() || coords.size() != r.n) {
        schema_error(line_no, "coords must have n=" + std::to_string(r.n) + " rows");
      }
      std::vector<Point2> pts;
      for (const auto& p : coords) {
        if (!p.is_array() || p.size() != 2) schema_error(line_no, "coordinate must be [x, y]");
        pts.push_back({p[0].get<double>(), p[1].get<double>()});
      }
      r.coords = std::move(pts);
    }
  } catch (const nlohmann::json::exception& e) {
    schema_error(line_no, std::string("wrong type: ") + e.what());
  }
  return r;
}

void write_dataset(std::span<const DatasetRecord> records, const std::filesystem::path& path) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::io_error, "cannot open " + tmp.string() + " for writing");
    for (const auto& r : records) out << to_json_line(r) << '\n';
    out.flush();
    if (!out) {
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw Error(Errc::io_error, "write failed for " + tmp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error(Errc::io_error, "cannot move dataset into place at " + path.string());
  }
}

std::vector<DatasetRecord> read_dataset(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io_error, "cannot open " + path.string());
  std::vector<DatasetRecord> records;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (std::all_of(line.begin(), line.end(), [](unsigned char c) { return std::isspace(c); })) continue;
    records.push_back(parse_json_line(line, line_no));
  }
  if (in.bad()) throw Error(Errc::io_error, "read failed for " + path.string());
  return records;
}

}  // namespace featforge
