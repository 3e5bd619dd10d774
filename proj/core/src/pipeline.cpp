#include "featforge/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "featforge/error.hpp"
#include "featforge/rng.hpp"
#include "featforge/wl.hpp"
#include "json.hpp"

namespace featforge {
namespace {

using Json = nlohmann::ordered_json;

// Stream tags for derive_seed.
constexpr std::uint64_t kGraphStream = 1;
constexpr std::uint64_t kFeatureStream = 2;
constexpr std::uint64_t kCalibrationStream = 3;

// Runs body(i) for i in [0, count) on up to `threads` workers. The first
// exception is rethrown after all workers stop.
template <typename Body>
void parallel_for(std::size_t count, std::size_t threads, Body&& body) {
  threads = std::max<std::size_t>(1, std::min(threads, count));
  if (threads == 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mu;
  std::vector<std::thread> workers;
  workers.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t) {
    workers.emplace_back([&] {
      while (!failed.load()) {
        const std::size_t i = next.fetch_add(1);
        if (i >= count) break;
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(error_mu);
          if (!error) error = std::current_exception();
          failed = true;
        }
      }
    });
  }
  for (auto& w : workers) w.join();
  if (error) std::rethrow_exception(error);
}

std::uint64_t feature_seed(std::uint64_t master, std::size_t index, const SchemeSpec& scheme) {
  return derive_seed(master, {kFeatureStream, index, static_cast<std::uint64_t>(scheme.kind), scheme.dim});
}

Json number_or_null(const std::optional<double>& x) {
  return x ? Json(round_to_digits(*x)) : Json(nullptr);
}

double pooled_positive_rate(const std::vector<DatasetRecord>& records, std::string_view split) {
  std::size_t pos = 0, total = 0;
  for (const auto& r : records) {
    if (r.split != split) continue;
    pos += static_cast<std::size_t>(std::count_if(r.labels.begin(), r.labels.end(), [](int y) { return y > 0; }));
    total += r.labels.size();
  }
  return total == 0 ? 0.0 : static_cast<double>(pos) / static_cast<double>(total);
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::io_error, "cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw Error(Errc::io_error, "write failed for " + path.string());
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json_text(std::string_view text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(Errc::invalid_parameter, std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw Error(Errc::invalid_parameter, "config must be a JSON object");
  ExperimentConfig c;
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "task") c.task = TaskSpec::parse(value.get<std::string>());
      else if (key == "family") c.family = parse_family(value.get<std::string>());
      else if (key == "n") c.n = value.get<std::size_t>();
      else if (key == "count") c.count = value.get<std::size_t>();
      else if (key == "seed") c.seed = value.get<std::uint64_t>();
      else if (key == "schemes") {
        c.schemes.clear();
        for (const auto& s : value) c.schemes.push_back(SchemeSpec::parse(s.get<std::string>()));
      } else if (key == "degree") {
        if (!value.is_null()) c.degree = value.get<std::size_t>();
      } else if (key == "p") {
        if (!value.is_null()) c.p = value.get<double>();
      } else if (key == "radius") {
        if (!value.is_null()) c.radius = value.get<double>();
      } else if (key == "out") c.out = value.get<std::string>();
      else if (key == "pilot_graphs") c.pilot_graphs = value.get<std::size_t>();
      else if (key == "threads") c.threads = value.get<std::size_t>();
      else throw Error(Errc::invalid_parameter, "unknown config key '" + key + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::invalid_parameter, std::string("config has a wrongly typed value: ") + e.what());
  }
  return c;
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io_error, "cannot open config " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return from_json_text(buf.str());
}

void ExperimentConfig::validate() const {
  task.validate();
  if (count == 0) throw Error(Errc::invalid_parameter, "count must be >= 1");
  if (n == 0) throw Error(Errc::invalid_parameter, "n must be >= 1");
  if (pilot_graphs == 0) throw Error(Errc::invalid_parameter, "pilot_graphs must be >= 1");
  const bool wrong_override = (family != Family::regular && degree) ||
                              (family != Family::erdos_renyi && p) ||
                              (family != Family::unit_disk && radius);
  if (wrong_override) {
    throw Error(Errc::invalid_parameter,
                "override does not match family " + std::string(to_string(family)));
  }
  for (const auto& s : schemes) {
    if (s.kind == SchemeKind::gtpos && family != Family::unit_disk) {
      throw Error(Errc::invalid_parameter, "gtpos features need the unit-disk family");
    }
    if ((s.kind == SchemeKind::canon || s.kind == SchemeKind::linf) && s.dim < n) {
      throw Error(Errc::dim_too_small, s.name() + " is narrower than n=" + std::to_string(n));
    }
  }
}

std::string ExperimentConfig::dataset_name() const { return task.name() + "_" + std::to_string(count); }

std::size_t resolve_threads(std::size_t requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("FEATFORGE_THREADS")) {
    char* end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (end != env && v > 0) return v;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void featurize_records(std::vector<DatasetRecord>& records, const SchemeSpec& scheme,
                       std::uint64_t seed, std::size_t threads) {
  parallel_for(records.size(), resolve_threads(threads), [&](std::size_t i) {
    auto& r = records[i];
    const Graph g = r.graph();
    r.add_feature(compute_features(g, scheme, feature_seed(seed, i, scheme), r.coords));
  });
}

std::optional<double> wl_auroc_of(const std::vector<DatasetRecord>& records, std::string_view scheme) {
  std::vector<LabeledGraph> train, test;
  for (const auto& r : records) {
    (r.split == "train" ? train : test).push_back(r.labeled(scheme));
  }
  try {
    return wl_auroc(train, test);
  } catch (const Error& e) {
    if (e.code() == Errc::degenerate_labels) return std::nullopt;
    throw;
  }
}

PipelineResult run_pipeline(const ExperimentConfig& config) {
  config.validate();
  PipelineResult result;

  CalibrationOptions copts;
  copts.pilot_graphs = config.pilot_graphs;
  if (config.degree) copts.override_value = static_cast<double>(*config.degree);
  if (config.p) copts.override_value = *config.p;
  if (config.radius) copts.override_value = *config.radius;
  result.calibration_overridden = copts.override_value.has_value();
  const std::uint64_t calibration_seed = derive_seed(config.seed, {kCalibrationStream});
  result.calibration = calibrate_balance(config.family, config.task, config.n, calibration_seed, copts);

  const std::string name = config.dataset_name();
  const std::size_t total = 2 * config.count;
  const std::size_t threads = resolve_threads(config.threads);
  std::vector<DatasetRecord> records(total);

  parallel_for(total, threads, [&](std::size_t i) {
    const bool train = i < config.count;
    const std::size_t local = train ? i : i - config.count;
    GenSpec spec = result.calibration.spec;
    spec.seed = derive_seed(config.seed, {kGraphStream, i});
    Sample sample = generate(spec);
    const NodeLabels labels = label_nodes(sample.graph, config.task);

    DatasetRecord& r = records[i];
    char id[64];
    std::snprintf(id, sizeof id, "%s-%s-%04zu", name.c_str(), train ? "train" : "test", local);
    r.id = id;
    r.n = sample.graph.size();
    r.edges = sample.graph.edges();
    r.labels = labels.values;
    r.task = config.task;
    r.split = train ? "train" : "test";
    r.coords = sample.coords;
    for (const auto& scheme : config.schemes) {
      r.add_feature(compute_features(sample.graph, scheme, feature_seed(config.seed, i, scheme), sample.coords));
    }
  });

  result.train_positive_rate = pooled_positive_rate(records, "train");
  result.test_positive_rate = pooled_positive_rate(records, "test");
  result.wl_auroc["none"] = wl_auroc_of(records, "none");
  for (const auto& scheme : config.schemes) result.wl_auroc[scheme.name()] = wl_auroc_of(records, scheme.name());

  std::filesystem::create_directories(config.out);
  result.dataset_path = config.out / (name + ".jsonl");
  result.report_path = config.out / (name + ".report.json");

  Json report;
  report["dataset"] = name;
  report["task"] = config.task.name();
  report["family"] = std::string(to_string(config.family));
  report["n"] = config.n;
  report["count"] = config.count;
  report["balance"] = {{"train", round_to_digits(result.train_positive_rate)},
                       {"test", round_to_digits(result.test_positive_rate)}};
  Json scores = Json::object();
  for (const auto& [scheme, score] : result.wl_auroc) scores[scheme] = number_or_null(score);
  report["wl_auroc"] = std::move(scores);
  report["calibration"] = {{"param", result.calibration.param},
                           {"value", round_to_digits(result.calibration.value)},
                           {"pilot_rate", round_to_digits(result.calibration.pilot_rate)},
                           {"overridden", result.calibration_overridden},
                           {"steps", result.calibration.steps},
                           {"pilot_graphs", config.pilot_graphs}};
  Json schemes = Json::array();
  for (const auto& s : config.schemes) schemes.push_back(s.name());
  report["schemes"] = std::move(schemes);
  report["seeds"] = {{"master", config.seed},
                     {"calibration", calibration_seed},
                     {"graph_seed_rule", "derive_seed(master, [1, index])"},
                     {"feature_seed_rule", "derive_seed(master, [2, index, scheme_kind, dim])"}};

  try {
    write_dataset(records, result.dataset_path);
    write_text(result.report_path, report.dump(2) + "\n");
  } catch (...) {
    std::error_code ec;
    std::filesystem::remove(result.dataset_path, ec);
    std::filesystem::remove(result.report_path, ec);
    throw;
  }
  result.records = std::move(records);
  return result;
}

}  // namespace featforge
