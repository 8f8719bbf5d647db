// Copyright 2026 The DynaHull Authors.
// SPDX-License-Identifier: Apache-2.0
//
// Resolved run configuration: built-in defaults, then an optional JSON
// config file, then command-line flags.

#ifndef DYNAHULL_TOOLS_RUN_CONFIG_HPP_
#define DYNAHULL_TOOLS_RUN_CONFIG_HPP_

#include <cstddef>
#include <filesystem>

#include <json.hpp>

#include "dynahull/dynahull.hpp"

namespace dynahull::cli {

// Keys: k, clusters, remove_min, remove_max, seed, vol_floor,
// threshold_mode, iter_step_frac, per_cluster_knn, kmeans_max_iter,
// kmeans_tol, ground{enabled, seed_band, inlier_eps, max_slope,
// ransac_iters}, emd_samples, strip_ground, strip_ceiling, threads.
nlohmann::json default_run_config();

// Reads a config file as a patch over `known`. Unknown keys are rejected
// with Error(kInvalidConfig).
nlohmann::json read_config_file(const std::filesystem::path& path,
                                const nlohmann::json& known);

DynaHullParams params_from_config(const nlohmann::json& config);
GroundParams ground_from_config(const nlohmann::json& config);

// The config as echoed into reports: everything except `threads`, which
// never affects results.
nlohmann::json echoed_config(const nlohmann::json& config);

}  // namespace dynahull::cli

#endif  // DYNAHULL_TOOLS_RUN_CONFIG_HPP_
