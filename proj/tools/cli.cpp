// Copyright 2026 The DynaHull Authors.
// SPDX-License-Identifier: Apache-2.0

#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "dynahull/cloud_io.hpp"
#include "dynahull/dynahull.hpp"
#include "dynahull/error.hpp"
#include "dynahull/ground_segmentation.hpp"
#include "dynahull/log.hpp"
#include "dynahull/metrics.hpp"
#include "dynahull/scenegen.hpp"
#include "dynahull/version.hpp"
#include "run_config.hpp"

namespace dynahull::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using Clock = std::chrono::steady_clock;

struct NoLabels : std::runtime_error {
  using std::runtime_error::runtime_error;
};

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidConfig:
    case ErrorCode::kInvalidArgument:
      return kExitConfig;
    case ErrorCode::kMalformedHeader:
    case ErrorCode::kNonFiniteCoordinate:
    case ErrorCode::kIoFailure:
      return kExitIo;
    default:
      return kExitPipeline;
  }
}

fs::path sibling(const fs::path& p, const std::string& suffix) {
  return p.parent_path() / (p.stem().string() + suffix);
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error(ErrorCode::kIoFailure, "cannot write " + path.string());
  f << text;
  if (!f) throw Error(ErrorCode::kIoFailure, "write failed for " + path.string());
}

// "-" or empty means stdout.
void emit_json(const json& j, const std::string& dest, std::ostream& out) {
  const std::string text = j.dump(2) + "\n";
  if (dest.empty() || dest == "-") {
    out << text;
  } else {
    write_text(dest, text);
  }
}

std::vector<std::size_t> load_index_list(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot open " + path.string());
  json j;
  try {
    in >> j;
    return j.get<std::vector<std::size_t>>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kMalformedHeader, path.string() + ": expected an index array: " + e.what());
  }
}

json plane_json(const Plane& p) {
  return {{"normal",
           {round_significant(p.normal.x), round_significant(p.normal.y),
            round_significant(p.normal.z)}},
          {"offset", round_significant(p.offset)}};
}

PointCloud without(const PointCloud& cloud, const GroundSplit& split) {
  return cloud.subset(split.nonground_indices);
}

// Optional ground / ceiling stripping before metrics.
PointCloud strip_for_metrics(const PointCloud& cloud, const json& cfg) {
  PointCloud c = cloud;
  GroundParams gp = ground_from_config(cfg);
  if (cfg.at("strip_ground").get<bool>()) {
    try {
      c = without(c, segment_ground(c, gp));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kNoGroundFound) throw;
      warn(std::string("strip-ground skipped: ") + e.what());
    }
  }
  if (cfg.at("strip_ceiling").get<bool>()) {
    try {
      c = without(c, segment_ceiling(c, gp));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kNoGroundFound) throw;
      warn(std::string("strip-ceiling skipped: ") + e.what());
    }
  }
  return c;
}

MetricsReport compute_metrics(const PointCloud& pred, const PointCloud& truth,
                              const json& cfg) {
  const auto t0 = Clock::now();
  const PointCloud p = strip_for_metrics(pred, cfg);
  const PointCloud t = strip_for_metrics(truth, cfg);
  const auto threads = cfg.at("threads").get<std::size_t>();
  MetricsReport r;
  r.distance = nn_distance_stats(p, t, threads);
  r.chamfer = chamfer(p, t, threads);
  r.emd = emd(p, t, cfg.at("emd_samples").get<std::size_t>(),
              cfg.at("seed").get<std::uint64_t>());
  r.runtime_s = std::chrono::duration<double>(Clock::now() - t0).count();
  return r;
}

PointCloud load_with_labels(const std::string& path, const std::string& labels_path,
                            CloudFormat fmt = CloudFormat::kAuto) {
  PointCloud c = load_cloud(path, fmt);
  if (!labels_path.empty()) c = c.with_labels(load_label_sidecar(labels_path));
  return c;
}

std::vector<long long> parse_values(const std::string& text) {
  std::vector<long long> values;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t comma = text.find(',', pos);
    if (comma == std::string::npos) comma = text.size();
    std::string item = text.substr(pos, comma - pos);
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (!item.empty()) {
      long long v = 0;
      const auto [end, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
      if (ec != std::errc() || end != item.data() + item.size()) {
        throw Error(ErrorCode::kInvalidConfig, "bad value '" + item + "' in --values");
      }
      values.push_back(v);
    }
    pos = comma + 1;
  }
  if (values.empty()) throw Error(ErrorCode::kInvalidConfig, "--values is empty");
  return values;
}

// Options shared by several subcommands. Flag callbacks write into
// `patch`, which is merged last so flags win over the config file.
struct Shared {
  json patch = json::object();
  std::string config_path;
};

void add_filter_flags(CLI::App* cmd, Shared& s) {
  auto set = [&s](const char* key) {
    return [&s, key](const auto& v) { s.patch[key] = v; };
  };
  auto set_ground = [&s](const char* key) {
    return [&s, key](const auto& v) { s.patch["ground"][key] = v; };
  };
  cmd->add_option_function<long long>("--k", set("k"), "neighbours per convex hull (>= 4)");
  cmd->add_option_function<long long>("--clusters", set("clusters"), "k-means cluster count");
  cmd->add_option_function<double>("--remove-min", set("remove_min"), "removal percent for the smallest cluster");
  cmd->add_option_function<double>("--remove-max", set("remove_max"), "removal percent for the largest cluster");
  cmd->add_option_function<double>("--vol-floor", set("vol_floor"), "lower clamp on hull volume");
  cmd->add_option_function<std::string>("--threshold-mode", set("threshold_mode"), "quantile | iterative");
  cmd->add_option_function<double>("--iter-step-frac", set("iter_step_frac"), "iterative step as a fraction of the density std-dev");
  cmd->add_flag_callback("--per-cluster-knn", [&s] { s.patch["per_cluster_knn"] = true; },
                         "search neighbours within each cluster only");
  cmd->add_option_function<long long>("--kmeans-max-iter", set("kmeans_max_iter"));
  cmd->add_option_function<double>("--kmeans-tol", set("kmeans_tol"));
  cmd->add_flag_callback("--no-ground", [&s] { s.patch["ground"]["enabled"] = false; },
                         "skip ground segmentation");
  cmd->add_option_function<double>("--ground-seed-band", set_ground("seed_band"));
  cmd->add_option_function<double>("--ground-inlier-eps", set_ground("inlier_eps"));
  cmd->add_option_function<double>("--ground-max-slope", set_ground("max_slope"), "degrees");
  cmd->add_option_function<long long>("--ransac-iters", set_ground("ransac_iters"));
}

void add_metric_flags(CLI::App* cmd, Shared& s) {
  cmd->add_option_function<long long>("--emd-samples", [&s](long long v) { s.patch["emd_samples"] = v; },
                                      "points per cloud for EMD");
  cmd->add_flag_callback("--strip-ground", [&s] { s.patch["strip_ground"] = true; },
                         "exclude ground points from metrics");
  cmd->add_flag_callback("--strip-ceiling,--remove-ceiling",
                         [&s] { s.patch["strip_ceiling"] = true; },
                         "exclude ceiling points from metrics");
}

json resolve(const Shared& s) {
  json cfg = default_run_config();
  if (!s.config_path.empty()) cfg.merge_patch(read_config_file(s.config_path, cfg));
  cfg.merge_patch(s.patch);
  if (cfg.at("emd_samples").get<long long>() < 1) {
    throw Error(ErrorCode::kInvalidConfig, "emd_samples must be >= 1");
  }
  params_from_config(cfg);  // validates
  return cfg;
}

json report_header(const char* command, const json& cfg) {
  return {{"version", std::string(kVersion)}, {"command", command},
          {"config", echoed_config(cfg)}};
}

// ---- gen --------------------------------------------------------------

struct GenArgs {
  std::string scenario, out, format = "binary";
  std::optional<long long> frames, actors, static_points, actor_points;
  std::optional<double> noise;
};

int cmd_gen(const GenArgs& a, const Shared& s, std::ostream& out) {
  ScenarioConfig sc;
  if (!a.scenario.empty()) sc = load_scenario(a.scenario);
  // Of the run config only the seed applies to generation.
  if (!s.config_path.empty()) {
    const json patch = read_config_file(s.config_path, default_run_config());
    if (patch.contains("seed")) sc.seed = patch["seed"].get<std::uint64_t>();
  }
  if (s.patch.contains("seed")) sc.seed = s.patch["seed"].get<std::uint64_t>();
  auto non_negative = [](long long v) {
    if (v < 0) throw Error(ErrorCode::kInvalidConfig, "counts must be non-negative");
    return static_cast<std::size_t>(v);
  };
  if (a.frames) sc.n_frames = non_negative(*a.frames);
  if (a.actors) sc.n_actors = non_negative(*a.actors);
  if (a.static_points) sc.points_per_frame_static = non_negative(*a.static_points);
  if (a.actor_points) sc.points_per_actor_frame = non_negative(*a.actor_points);
  if (a.noise) sc.noise_sigma = *a.noise;
  sc.validate();
  const CloudFormat fmt = parse_cloud_format(a.format);

  const LabeledScene scene = generate_scene(sc);
  save_cloud(scene.cloud, a.out, fmt);
  const fs::path prov = sibling(a.out, ".provenance.json");
  write_text(prov, provenance_json(sc, scene).dump(2) + "\n");

  json summary = {{"version", std::string(kVersion)},
                  {"command", "gen"},
                  {"scenario", to_json(sc)},
                  {"points", scene.cloud.size()},
                  {"static", scene.cloud.count(MotionLabel::kStatic)},
                  {"dynamic", scene.cloud.count(MotionLabel::kDynamic)},
                  {"out", a.out},
                  {"provenance", prov.string()}};
  out << summary.dump(2) << "\n";
  return kExitOk;
}

// ---- filter -----------------------------------------------------------

struct FilterArgs {
  std::string in, out, removed, report, labels, format = "binary";
  bool no_timings = false;
};

int cmd_filter(const FilterArgs& a, const Shared& s, std::ostream& out) {
  const json cfg = resolve(s);
  const DynaHullParams params = params_from_config(cfg);
  const CloudFormat fmt = parse_cloud_format(a.format);
  const PointCloud cloud = load_with_labels(a.in, a.labels);

  const FilterResult r = filter_map(cloud, params);

  save_cloud(r.filtered, a.out, fmt);
  const std::string removed_path =
      a.removed.empty() ? sibling(a.out, ".removed.json").string() : a.removed;
  write_text(removed_path, json(r.removed_indices).dump() + "\n");

  json rep = report_header("filter", cfg);
  rep["input"] = {{"path", a.in}, {"points", cloud.size()}, {"labeled", cloud.has_labels()}};
  rep["ground"] = {{"enabled", params.ground.enabled},
                   {"found", r.ground_found},
                   {"points", r.ground.ground_indices.size()},
                   {"plane", r.ground_found ? plane_json(r.ground.plane) : json(nullptr)}};
  json clusters = json::array();
  for (std::size_t c = 0; c < r.plan.size(); ++c) {
    const auto& p = r.plan[c];
    clusters.push_back({{"id", c},
                        {"N", p.count},
                        {"R", round_significant(p.removal_pct)},
                        {"tau", round_significant(p.threshold)},
                        {"removed", p.removed},
                        {"mean_density", round_significant(p.mean_density)}});
  }
  rep["clusters"] = clusters;
  rep["removed_points"] = r.removed_indices.size();
  rep["retained_points"] = r.filtered.size();
  rep["confusion"] = cloud.has_labels()
                         ? to_json(confusion(*cloud.labels(), r.removed_indices))
                         : json(nullptr);
  rep["warnings"] = r.warnings;
  if (!a.no_timings) {
    rep["execution"] = {{"threads", params.threads},
                        {"timings_s",
                         {{"ground", r.timings.ground_s},
                          {"clustering", r.timings.clustering_s},
                          {"density", r.timings.density_s},
                          {"threshold", r.timings.threshold_s},
                          {"total", r.timings.total_s}}}};
  }
  const std::string report_path =
      a.report.empty() ? sibling(a.out, ".report.json").string() : a.report;
  emit_json(rep, report_path, out);
  return kExitOk;
}

// ---- eval -------------------------------------------------------------

struct EvalArgs {
  std::string pred, truth, removed, labels, original, report;
};

int cmd_eval(const EvalArgs& a, const Shared& s, std::ostream& out) {
  const json cfg = resolve(s);
  const PointCloud pred = load_cloud(a.pred);
  const PointCloud truth = load_cloud(a.truth);

  std::optional<ConfusionReport> conf;
  if (!a.removed.empty()) {
    std::optional<std::vector<MotionLabel>> labels;
    if (!a.labels.empty()) {
      labels = load_label_sidecar(a.labels);
    } else if (!a.original.empty()) {
      const PointCloud orig = load_cloud(a.original);
      if (orig.has_labels()) labels = *orig.labels();
    }
    if (!labels) {
      throw NoLabels("confusion needs labels: pass --labels or a labeled --original");
    }
    conf = confusion(*labels, load_index_list(a.removed));
  }

  MetricsReport m = compute_metrics(pred, truth, cfg);
  m.confusion = conf;
  json rep = to_json(m);
  const json header = report_header("eval", cfg);
  for (const auto& [k, v] : header.items()) rep[k] = v;
  emit_json(rep, a.report, out);
  return kExitOk;
}

// ---- bench ------------------------------------------------------------

struct BenchArgs {
  std::string in, scenario, labels, truth, axis, values, report;
};

int cmd_bench(const BenchArgs& a, const Shared& s, std::ostream& out) {
  const json base = resolve(s);
  if (a.axis != "k" && a.axis != "clusters") {
    throw Error(ErrorCode::kInvalidConfig, "--axis must be 'k' or 'clusters'");
  }
  const std::vector<long long> values = parse_values(a.values);
  if (a.in.empty() == a.scenario.empty()) {
    throw Error(ErrorCode::kInvalidConfig, "bench needs exactly one of --in or --scenario");
  }
  // Validate every sweep point before running any of them.
  std::vector<json> configs;
  for (long long v : values) {
    json cfg = base;
    cfg[a.axis] = v;
    params_from_config(cfg);
    configs.push_back(std::move(cfg));
  }

  PointCloud cloud;
  std::optional<PointCloud> truth;
  if (!a.scenario.empty()) {
    ScenarioConfig sc = load_scenario(a.scenario);
    const LabeledScene scene = generate_scene(sc);
    cloud = scene.cloud;
    truth = ground_truth_cloud(scene);
  } else {
    cloud = load_with_labels(a.in, a.labels);
  }
  if (!a.truth.empty()) {
    truth = load_cloud(a.truth);
  } else if (!truth) {
    if (!cloud.has_labels()) {
      throw Error(ErrorCode::kInvalidConfig,
                  "bench needs --truth or a labeled input to derive one");
    }
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < cloud.size(); ++i) {
      if ((*cloud.labels())[i] == MotionLabel::kStatic) idx.push_back(i);
    }
    truth = cloud.subset(idx);
  }

  json rows = json::array();
  for (std::size_t i = 0; i < values.size(); ++i) {
    const DynaHullParams params = params_from_config(configs[i]);
    const auto t0 = Clock::now();
    const FilterResult r = filter_map(cloud, params);
    const double runtime = std::chrono::duration<double>(Clock::now() - t0).count();
    MetricsReport m = compute_metrics(r.filtered, *truth, configs[i]);
    if (cloud.has_labels()) m.confusion = confusion(*cloud.labels(), r.removed_indices);
    rows.push_back({{"value", values[i]},
                    {"metrics", to_json(m)},
                    {"runtime_s", runtime},
                    {"removed_points", r.removed_indices.size()}});
  }
  json rep = report_header("bench", base);
  rep["axis"] = a.axis;
  rep["input_points"] = cloud.size();
  rep["rows"] = rows;
  emit_json(rep, a.report, out);
  return kExitOk;
}

class WarningsTo {
 public:
  explicit WarningsTo(std::ostream& err)
      : previous_(set_warning_handler(
            [&err](std::string_view m) { err << "warning: " << m << '\n'; })) {}
  ~WarningsTo() { set_warning_handler(std::move(previous_)); }
  WarningsTo(const WarningsTo&) = delete;
  WarningsTo& operator=(const WarningsTo&) = delete;

 private:
  WarningHandler previous_;
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  WarningsTo redirect(err);
  CLI::App app{"Dynamic-point removal for accumulated point cloud maps", "dynahull"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);
  app.fallthrough();

  Shared shared;
  app.add_option_function<std::uint64_t>(
      "--seed", [&](std::uint64_t v) { shared.patch["seed"] = v; }, "random seed");
  app.add_option_function<long long>(
      "--threads", [&](long long v) { shared.patch["threads"] = v; },
      "worker threads, 0 = all cores");
  app.add_option("--config", shared.config_path, "JSON config file");

  GenArgs gen;
  auto* g = app.add_subcommand("gen", "generate a labeled synthetic scene");
  g->add_option("--scenario", gen.scenario, "scenario JSON");
  g->add_option("--out", gen.out, "output PCD")->required();
  g->add_option("--format", gen.format, "binary | ascii");
  g->add_option("--frames", gen.frames);
  g->add_option("--actors", gen.actors);
  g->add_option("--static-points", gen.static_points, "static points per frame");
  g->add_option("--actor-points", gen.actor_points, "points per actor per frame");
  g->add_option("--noise", gen.noise, "sensor noise sigma (m)");

  FilterArgs filt;
  auto* f = app.add_subcommand("filter", "remove dynamic points from a map");
  f->add_option("--in", filt.in, "input PCD/PLY")->required();
  f->add_option("--out", filt.out, "filtered PCD")->required();
  f->add_option("--removed", filt.removed, "removed-index JSON (default <out>.removed.json)");
  f->add_option("--report", filt.report, "run report (default <out>.report.json, - for stdout)");
  f->add_option("--labels", filt.labels, "label sidecar JSON");
  f->add_option("--format", filt.format, "binary | ascii");
  f->add_flag("--no-timings", filt.no_timings, "omit the execution block from the report");
  add_filter_flags(f, shared);

  EvalArgs ev;
  auto* e = app.add_subcommand("eval", "compare a map against ground truth");
  e->add_option("--pred", ev.pred, "predicted map")->required();
  e->add_option("--truth", ev.truth, "ground truth map")->required();
  e->add_option("--removed", ev.removed, "removed-index JSON, enables confusion");
  e->add_option("--labels", ev.labels, "label sidecar JSON");
  e->add_option("--original", ev.original, "labeled unfiltered map");
  e->add_option("--report", ev.report, "output path (default stdout)");
  add_metric_flags(e, shared);
  e->add_option_function<double>("--ground-seed-band", [&](double v) { shared.patch["ground"]["seed_band"] = v; });
  e->add_option_function<double>("--ground-inlier-eps", [&](double v) { shared.patch["ground"]["inlier_eps"] = v; });

  BenchArgs bench;
  auto* b = app.add_subcommand("bench", "parameter sweep of filter + eval");
  b->add_option("--in", bench.in, "input map");
  b->add_option("--scenario", bench.scenario, "generate the input from a scenario");
  b->add_option("--labels", bench.labels, "label sidecar JSON");
  b->add_option("--truth", bench.truth, "ground truth map (default: static points of input)");
  b->add_option("--axis", bench.axis, "k | clusters")->required();
  b->add_option("--values", bench.values, "comma separated values")->required();
  b->add_option("--report", bench.report, "output path (default stdout)");
  add_filter_flags(b, shared);
  add_metric_flags(b, shared);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& ex) {
    err << "error: " << ex.what() << "\n";
    return kExitConfig;
  }

  try {
    if (*g) return cmd_gen(gen, shared, out);
    if (*f) return cmd_filter(filt, shared, out);
    if (*e) return cmd_eval(ev, shared, out);
    if (*b) return cmd_bench(bench, shared, out);
  } catch (const Error& ex) {
    err << "error [" << to_string(ex.code()) << "]: " << ex.what() << "\n";
    return exit_code_for(ex.code());
  } catch (const NoLabels& ex) {
    err << "error: " << ex.what() << "\n";
    return kExitNoLabels;
  } catch (const json::exception& ex) {
    err << "error: " << ex.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& ex) {
    err << "error: " << ex.what() << "\n";
    return kExitPipeline;
  }
  return kExitConfig;
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, out, err);
}

}  // namespace dynahull::cli
