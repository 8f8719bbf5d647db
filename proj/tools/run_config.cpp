// Copyright 2026 The DynaHull Authors.
// SPDX-License-Identifier: Apache-2.0

#include "run_config.hpp"

#include <fstream>
#include <string>

#include "dynahull/error.hpp"

namespace dynahull::cli {
namespace {

void check_keys(const nlohmann::json& patch, const nlohmann::json& known,
                const std::string& prefix) {
  if (!patch.is_object()) {
    throw Error(ErrorCode::kInvalidConfig, "config " + prefix + " must be a JSON object");
  }
  for (const auto& [key, value] : patch.items()) {
    if (!known.contains(key)) {
      throw Error(ErrorCode::kInvalidConfig, "unknown config key '" + prefix + key + "'");
    }
    if (known.at(key).is_object()) check_keys(value, known.at(key), prefix + key + ".");
  }
}

template <typename T>
T get(const nlohmann::json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw Error(ErrorCode::kInvalidConfig, std::string("config key '") + key + "' has the wrong type");
  }
}

}  // namespace

nlohmann::json default_run_config() {
  const DynaHullParams p;
  return {{"k", p.k_neighbors},
          {"clusters", p.n_clusters},
          {"remove_min", p.min_remove},
          {"remove_max", p.max_remove},
          {"seed", p.seed},
          {"vol_floor", p.vol_floor},
          {"threshold_mode", std::string(to_string(p.threshold_mode))},
          {"iter_step_frac", p.iter_step_frac},
          {"per_cluster_knn", p.per_cluster_knn},
          {"kmeans_max_iter", p.kmeans_max_iter},
          {"kmeans_tol", p.kmeans_tol},
          {"ground",
           {{"enabled", p.ground.enabled},
            {"seed_band", p.ground.seed_band},
            {"inlier_eps", p.ground.inlier_eps},
            {"max_slope", p.ground.max_slope_deg},
            {"ransac_iters", p.ground.ransac_iters}}},
          {"emd_samples", 512},
          {"strip_ground", false},
          {"strip_ceiling", false},
          {"threads", 1}};
}

nlohmann::json read_config_file(const std::filesystem::path& path,
                                const nlohmann::json& known) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kInvalidConfig, "cannot open config " + path.string());
  nlohmann::json patch;
  try {
    in >> patch;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kInvalidConfig, "config " + path.string() + ": " + e.what());
  }
  check_keys(patch, known, "");
  return patch;
}

GroundParams ground_from_config(const nlohmann::json& config) {
  const auto& g = config.at("ground");
  GroundParams p;
  p.enabled = get<bool>(g, "enabled");
  p.seed_band = get<double>(g, "seed_band");
  p.inlier_eps = get<double>(g, "inlier_eps");
  p.max_slope_deg = get<double>(g, "max_slope");
  p.ransac_iters = get<std::size_t>(g, "ransac_iters");
  p.seed = get<std::uint64_t>(config, "seed");
  return p;
}

DynaHullParams params_from_config(const nlohmann::json& c) {
  DynaHullParams p;
  const auto k = get<long long>(c, "k");
  const auto clusters = get<long long>(c, "clusters");
  if (k < 0 || clusters < 0) throw Error(ErrorCode::kInvalidConfig, "k and clusters must be positive");
  p.k_neighbors = static_cast<std::size_t>(k);
  p.n_clusters = static_cast<std::size_t>(clusters);
  p.min_remove = get<double>(c, "remove_min");
  p.max_remove = get<double>(c, "remove_max");
  p.seed = get<std::uint64_t>(c, "seed");
  p.vol_floor = get<double>(c, "vol_floor");
  p.threshold_mode = parse_threshold_mode(get<std::string>(c, "threshold_mode"));
  p.iter_step_frac = get<double>(c, "iter_step_frac");
  p.per_cluster_knn = get<bool>(c, "per_cluster_knn");
  p.kmeans_max_iter = get<std::size_t>(c, "kmeans_max_iter");
  p.kmeans_tol = get<double>(c, "kmeans_tol");
  p.ground = ground_from_config(c);
  p.threads = get<std::size_t>(c, "threads");
  p.validate();
  return p;
}

nlohmann::json echoed_config(const nlohmann::json& config) {
  nlohmann::json out = config;
  out.erase("threads");
  return out;
}

}  // namespace dynahull::cli
