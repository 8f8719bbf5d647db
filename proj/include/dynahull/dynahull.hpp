// Copyright 2026 The DynaHull Authors.
// SPDX-License-Identifier: Apache-2.0
//
// Density-based dynamic point removal for accumulated maps.
//
// Each non-ground point gets a density factor k / v, where v is the convex
// hull volume of its k nearest neighbors (itself included). Static structure
// re-observed across many scans packs into thin, dense neighborhoods; points
// smeared by moving objects occupy large hulls. The map is split into
// k-means clusters, each cluster is assigned a removal percentage that grows
// linearly with its point count, and the lowest-density points of each
// cluster are dropped up to that percentage.

#ifndef DYNAHULL_DYNAHULL_HPP_
#define DYNAHULL_DYNAHULL_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dynahull/ground_segmentation.hpp"
#include "dynahull/point_cloud.hpp"

namespace dynahull {

enum class ThresholdMode { kQuantile, kIterative };

ThresholdMode parse_threshold_mode(std::string_view name);
std::string_view to_string(ThresholdMode mode);

struct DynaHullParams {
  std::size_t k_neighbors = 75;
  std::size_t n_clusters = 5;
  double min_remove = 5.0;   // percent
  double max_remove = 20.0;  // percent
  std::uint64_t seed = 0;
  GroundParams ground;       // ground.seed is overridden by `seed`
  double vol_floor = 1e-12;  // cubic meters
  ThresholdMode threshold_mode = ThresholdMode::kQuantile;
  double iter_step_frac = 0.01;
  // Literal per-cluster neighborhoods instead of one tree over the whole
  // non-ground cloud.
  bool per_cluster_knn = false;
  std::size_t kmeans_max_iter = 100;
  double kmeans_tol = 1e-4;
  std::size_t threads = 1;   // 0 = hardware concurrency; never changes output

  // Throws Error(kInvalidConfig) naming the offending field.
  void validate() const;
};

// One density per point, aligned with the input order.
struct DensityField {
  std::vector<double> densities;  // points per cubic meter, finite, > 0
};

// density_i = m / max(hull_volume(knn(p_i, k)), vol_floor), with m the
// number of neighbors found (k whenever the cloud has >= k points).
// Throws Error(kTooFewPoints) when the cloud has fewer than k points.
DensityField density_field(std::span<const Point3> points, std::size_t k,
                           double vol_floor, std::size_t threads = 1);

// Neighborhoods restricted to each point's own cluster.
DensityField density_field_per_cluster(std::span<const Point3> points,
                                       std::span<const std::uint32_t> labels,
                                       std::size_t n_clusters, std::size_t k,
                                       double vol_floor, std::size_t threads = 1);

// R_i = (N_i - N_min) / (N_max - N_min) * (max - min) + min, in percent.
// All R_i = min_remove when every count is equal.
std::vector<double> rescale_removal(std::span<const std::size_t> counts,
                                    double min_remove, double max_remove);

struct ThresholdResult {
  double threshold = 0.0;             // density threshold tau
  std::vector<std::size_t> removed;   // positions into the input, ascending
};

// kQuantile removes exactly floor(target% * n) lowest-density points (equal
// densities: lower position first) with tau the first retained density.
// kIterative raises tau from 0 in steps of iter_step_frac * stddev until the
// share of points below tau reaches target%.
ThresholdResult threshold_removal(std::span<const double> densities,
                                  double target_pct, ThresholdMode mode,
                                  double iter_step_frac = 0.01);

struct ClusterRemoval {
  std::size_t count = 0;        // N_i
  double removal_pct = 0.0;     // R_i
  double threshold = 0.0;       // tau_i
  std::size_t removed = 0;
  double mean_density = 0.0;
};

struct StageTimings {
  double ground_s = 0.0;
  double clustering_s = 0.0;
  double density_s = 0.0;
  double threshold_s = 0.0;
  double total_s = 0.0;
};

struct FilterResult {
  // Retained non-ground points in input order, then all ground points.
  PointCloud filtered;
  std::vector<std::size_t> removed_indices;  // into the input, ascending
  std::vector<ClusterRemoval> plan;
  GroundSplit ground;
  bool ground_found = false;
  // Per-point density for non-ground points (indexed like
  // ground.nonground_indices).
  std::vector<double> densities;
  std::vector<std::uint32_t> cluster_labels;
  StageTimings timings;
  std::vector<std::string> warnings;
};

// Ground split, k-means, density factors, per-cluster removal, merge and
// ground re-attachment. Pure function of (cloud, params).
FilterResult filter_map(const PointCloud& cloud, const DynaHullParams& params);

}  // namespace dynahull

#endif  // DYNAHULL_DYNAHULL_HPP_
