// featforge command-line tool: generate, featurize, wl, stress, export.
#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "featforge/dataset.hpp"
#include "featforge/error.hpp"
#include "featforge/pipeline.hpp"
#include "featforge/rng.hpp"
#include "featforge/stress.hpp"
#include "featforge/wl.hpp"

namespace ff = featforge;
using Json = nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitRuntime = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raw flag values; unset flags fall back to the --config file.
struct Flags {
  std::string config;
  std::optional<std::string> task, family, out, input, report, output;
  std::optional<std::size_t> n, count, degree, threads, pilot_graphs, dim, restarts;
  std::optional<double> p, radius;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> schemes;
};

ff::ExperimentConfig resolve(const Flags& f) {
  ff::ExperimentConfig c = f.config.empty() ? ff::ExperimentConfig{} : ff::ExperimentConfig::load(f.config);
  if (f.task) c.task = ff::TaskSpec::parse(*f.task);
  if (f.family) {
    c.family = ff::parse_family(*f.family);
    // A family switch invalidates overrides inherited from the config.
    if (c.family != ff::Family::regular) c.degree.reset();
    if (c.family != ff::Family::erdos_renyi) c.p.reset();
    if (c.family != ff::Family::unit_disk) c.radius.reset();
  }
  if (f.n) c.n = *f.n;
  if (f.count) c.count = *f.count;
  if (f.seed) c.seed = *f.seed;
  if (f.degree) c.degree = *f.degree;
  if (f.p) c.p = *f.p;
  if (f.radius) c.radius = *f.radius;
  if (f.out) c.out = *f.out;
  if (f.threads) c.threads = *f.threads;
  if (f.pilot_graphs) c.pilot_graphs = *f.pilot_graphs;
  if (!f.schemes.empty()) {
    c.schemes.clear();
    for (const auto& s : f.schemes) {
      if (s != "none") c.schemes.push_back(ff::SchemeSpec::parse(s));
    }
  }
  return c;
}

std::filesystem::path input_path(const Flags& f, const ff::ExperimentConfig& c) {
  if (f.input) return *f.input;
  if (!f.config.empty()) return c.out / (c.dataset_name() + ".jsonl");
  throw UsageError("--input is required (or --config naming a generated dataset)");
}

void emit(const Json& report, const std::optional<std::string>& path) {
  const std::string text = report.dump(2) + "\n";
  if (!path) {
    std::cout << text;
    return;
  }
  std::ofstream out(*path, std::ios::binary | std::ios::trunc);
  if (!out || !(out << text)) throw ff::Error(ff::Errc::io_error, "cannot write report " + *path);
}

Json score_json(const std::optional<double>& x) { return x ? Json(ff::round_to_digits(*x)) : Json(nullptr); }

int cmd_generate(const Flags& f) {
  const ff::ExperimentConfig c = resolve(f);
  const ff::PipelineResult r = ff::run_pipeline(c);
  Json summary;
  summary["dataset"] = r.dataset_path.string();
  summary["report"] = r.report_path.string();
  summary["calibration"] = {{"param", r.calibration.param},
                            {"value", r.calibration.value},
                            {"pilot_rate", ff::round_to_digits(r.calibration.pilot_rate)},
                            {"overridden", r.calibration_overridden}};
  summary["balance"] = {{"train", ff::round_to_digits(r.train_positive_rate)},
                        {"test", ff::round_to_digits(r.test_positive_rate)}};
  Json scores = Json::object();
  for (const auto& [name, s] : r.wl_auroc) scores[name] = score_json(s);
  summary["wl_auroc"] = std::move(scores);
  emit(summary, std::nullopt);
  return kExitOk;
}

int cmd_featurize(const Flags& f) {
  const ff::ExperimentConfig c = resolve(f);
  if (c.schemes.empty()) throw UsageError("featurize needs at least one --scheme");
  const auto in = input_path(f, c);
  auto records = ff::read_dataset(in);
  for (const auto& s : c.schemes) ff::featurize_records(records, s, c.seed, c.threads);
  ff::write_dataset(records, f.output ? std::filesystem::path(*f.output) : in);
  return kExitOk;
}

int cmd_wl(const Flags& f) {
  const ff::ExperimentConfig c = resolve(f);
  const auto in = input_path(f, c);
  const auto records = ff::read_dataset(in);
  std::vector<std::string> names{"none"};
  if (!f.schemes.empty()) {
    names = f.schemes;
    for (auto& s : names) s = s == "none" ? s : ff::SchemeSpec::parse(s).name();
  } else {
    for (const auto& s : c.schemes) names.push_back(s.name());
  }

  Json report;
  report["dataset"] = in.string();
  report["graphs"] = records.size();
  Json scores = Json::object();
  Json classes = Json::object();
  for (const auto& name : names) {
    scores[name] = score_json(ff::wl_auroc_of(records, name));
    std::size_t max_classes = 0, max_rounds = 0;
    for (const auto& r : records) {
      const auto lg = r.labeled(name);
      const auto col = ff::wl_refine(lg.graph, lg.features ? &*lg.features : nullptr);
      max_classes = std::max(max_classes, col.num_classes());
      max_rounds = std::max(max_rounds, col.rounds);
    }
    classes[name] = {{"max_color_classes", max_classes}, {"max_rounds", max_rounds}};
  }
  report["wl_auroc"] = std::move(scores);
  report["refinement"] = std::move(classes);
  emit(report, f.report);
  return kExitOk;
}

int cmd_stress(const Flags& f) {
  const ff::ExperimentConfig c = resolve(f);
  const auto in = input_path(f, c);
  const auto records = ff::read_dataset(in);
  const std::size_t dim = f.dim.value_or(2);
  const std::size_t restarts = f.restarts.value_or(1);
  if (dim == 0 || restarts == 0) throw UsageError("--dim and --restarts must be >= 1");

  Json rows = Json::array();
  double total = 0.0;
  std::size_t coincident = 0;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto layout = ff::minimize_stress_best_of(records[i].graph(), dim, ff::derive_seed(c.seed, {i}), restarts);
    total += layout.stress;
    coincident += layout.coincident ? 1 : 0;
    rows.push_back({{"id", records[i].id},
                    {"stress", ff::round_to_digits(layout.stress)},
                    {"grad_norm", ff::round_to_digits(layout.grad_norm)},
                    {"iterations", layout.iterations},
                    {"coincident", layout.coincident}});
  }
  Json report;
  report["dataset"] = in.string();
  report["dim"] = dim;
  report["restarts"] = restarts;
  report["mean_stress"] = records.empty() ? Json(nullptr) : Json(ff::round_to_digits(total / records.size()));
  report["coincident_layouts"] = coincident;
  report["graphs"] = std::move(rows);
  emit(report, f.report);
  return kExitOk;
}

int cmd_export(const Flags& f) {
  const ff::ExperimentConfig c = resolve(f);
  const auto in = input_path(f, c);
  if (!f.out) throw UsageError("export needs --out");
  auto records = ff::read_dataset(in);
  if (!f.schemes.empty()) {
    // Keep only the requested feature schemes.
    std::vector<std::string> keep;
    for (const auto& s : f.schemes) keep.push_back(ff::SchemeSpec::parse(s).name());
    for (auto& r : records) {
      std::erase_if(r.features, [&](const auto& kv) { return std::find(keep.begin(), keep.end(), kv.first) == keep.end(); });
      std::erase_if(r.regen, [&](const auto& kv) { return !r.features.contains(kv.first); });
    }
  }
  ff::write_dataset(records, *f.out);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Synthetic beyond-WL graph datasets, node features and WL analysis"};
  app.require_subcommand(1);
  Flags f;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", f.config, "JSON experiment config; flags override it")->check(CLI::ExistingFile);
    sub->add_option("--seed", f.seed, "Master seed");
    sub->add_option("--threads", f.threads, "Worker threads (default: FEATFORGE_THREADS or all cores)");
  };

  auto* gen = app.add_subcommand("generate", "Calibrate, generate, label, featurize and write a dataset");
  common(gen);
  gen->add_option("--task", f.task, "C<i>, K<i> or LCC");
  gen->add_option("--family", f.family, "regular | erdos-renyi | unit-disk");
  gen->add_option("--n", f.n, "Nodes per graph");
  gen->add_option("--count", f.count, "Graphs per split");
  auto* deg = gen->add_option("--degree", f.degree, "Regular degree override");
  auto* p = gen->add_option("--p", f.p, "Erdos-Renyi edge probability override");
  auto* rad = gen->add_option("--radius", f.radius, "Unit-disk radius override");
  deg->excludes(p)->excludes(rad);
  p->excludes(rad);
  gen->add_option("--scheme", f.schemes, "Feature scheme, e.g. canon:20 pos:2 rbits:2 (repeatable)");
  gen->add_option("--pilot-graphs", f.pilot_graphs, "Graphs per calibration pilot");
  gen->add_option("--out", f.out, "Output directory");

  auto* feat = app.add_subcommand("featurize", "Add feature schemes to a dataset");
  common(feat);
  feat->add_option("--input", f.input, "Dataset JSONL");
  feat->add_option("--scheme", f.schemes, "canon:20 | linf:20 | pos:2 | rnormal:1 | runiform | rbits:2 (repeatable)");
  feat->add_option("--output", f.output, "Write here instead of rewriting the input");

  auto* wl = app.add_subcommand("wl", "WL refinement statistics and WL-optimal AUROC");
  common(wl);
  wl->add_option("--input", f.input, "Dataset JSONL");
  wl->add_option("--scheme", f.schemes, "Feature scheme(s) seeding refinement; 'none' for plain WL");
  wl->add_option("--report", f.report, "Write the JSON report here instead of stdout");

  auto* st = app.add_subcommand("stress", "Stress-minimized layouts of every graph in a dataset");
  common(st);
  st->add_option("--input", f.input, "Dataset JSONL");
  st->add_option("--dim", f.dim, "Embedding dimension (default 2)");
  st->add_option("--restarts", f.restarts, "Restarts per graph, best kept (default 1)");
  st->add_option("--report", f.report, "Write the JSON report here instead of stdout");

  auto* ex = app.add_subcommand("export", "Validate a dataset and write it, optionally keeping only some schemes");
  common(ex);
  ex->add_option("--input", f.input, "Dataset JSONL");
  ex->add_option("--out", f.out, "Output JSONL path");
  ex->add_option("--scheme", f.schemes, "Schemes to keep (default: all)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (gen->parsed()) return cmd_generate(f);
    if (feat->parsed()) return cmd_featurize(f);
    if (wl->parsed()) return cmd_wl(f);
    if (st->parsed()) return cmd_stress(f);
    if (ex->parsed()) return cmd_export(f);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ff::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    // Bad parameters supplied on the command line are usage errors.
    return e.code() == ff::Errc::invalid_parameter ? kExitUsage : kExitRuntime;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitUsage;
}
