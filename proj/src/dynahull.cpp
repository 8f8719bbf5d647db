// Copyright 2026 The DynaHull Authors.
// SPDX-License-Identifier: Apache-2.0

#include "dynahull/dynahull.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>

#include "dynahull/convex_hull.hpp"
#include "dynahull/error.hpp"
#include "dynahull/kdtree.hpp"
#include "dynahull/kmeans.hpp"
#include "dynahull/log.hpp"
#include "dynahull/parallel.hpp"

namespace dynahull {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorCode::kInvalidConfig, what);
}

// Floor of target% * n, guarded against 0.1 + 0.2 style rounding just
// below an integer.
std::size_t scheduled_count(double target_pct, std::size_t n) {
  const double exact = target_pct * static_cast<double>(n) / 100.0;
  return std::min(n, static_cast<std::size_t>(std::floor(exact + 1e-9)));
}

}  // namespace

ThresholdMode parse_threshold_mode(std::string_view name) {
  if (name == "quantile") return ThresholdMode::kQuantile;
  if (name == "iterative") return ThresholdMode::kIterative;
  throw Error(ErrorCode::kInvalidConfig,
              "threshold mode must be 'quantile' or 'iterative'");
}

std::string_view to_string(ThresholdMode mode) {
  return mode == ThresholdMode::kQuantile ? "quantile" : "iterative";
}

void DynaHullParams::validate() const {
  require(k_neighbors >= 4, "k_neighbors must be >= 4");
  require(n_clusters >= 1, "n_clusters must be >= 1");
  require(0.0 <= min_remove && min_remove <= max_remove && max_remove <= 100.0,
          "removal range must satisfy 0 <= min_remove <= max_remove <= 100");
  require(vol_floor > 0.0 && std::isfinite(vol_floor), "vol_floor must be > 0");
  require(iter_step_frac > 0.0 && std::isfinite(iter_step_frac),
          "iter_step_frac must be > 0");
  require(kmeans_max_iter >= 1, "kmeans_max_iter must be >= 1");
  require(kmeans_tol >= 0.0, "kmeans_tol must be >= 0");
  require(ground.seed_band > 0.0, "ground seed_band must be > 0");
  require(ground.inlier_eps > 0.0, "ground inlier_eps must be > 0");
  require(ground.max_slope_deg >= 0.0 && ground.max_slope_deg < 90.0,
          "ground max_slope must be in [0, 90)");
}

DensityField density_field(std::span<const Point3> points, std::size_t k,
                           double vol_floor, std::size_t threads) {
  if (points.size() < k) {
    throw Error(ErrorCode::kTooFewPoints,
                "density needs at least k=" + std::to_string(k) +
                    " points, got " + std::to_string(points.size()));
  }
  const KdTree3 tree(points);
  DensityField field;
  field.densities.resize(points.size());
  parallel_for(points.size(), threads, [&](std::size_t begin, std::size_t end) {
    KnnResult nn;
    std::vector<Point3> hood;
    for (std::size_t i = begin; i < end; ++i) {
      tree.knn(points[i], k, nn);
      hood.clear();
      for (auto j : nn.indices) hood.push_back(points[j]);
      const double v = hull_volume(hood);
      field.densities[i] = static_cast<double>(hood.size()) / std::max(v, vol_floor);
    }
  });
  return field;
}

DensityField density_field_per_cluster(std::span<const Point3> points,
                                       std::span<const std::uint32_t> labels,
                                       std::size_t n_clusters, std::size_t k,
                                       double vol_floor, std::size_t threads) {
  DensityField field;
  field.densities.resize(points.size());
  std::vector<std::vector<std::size_t>> members(n_clusters);
  for (std::size_t i = 0; i < labels.size(); ++i) members[labels[i]].push_back(i);
  for (const auto& idx : members) {
    if (idx.empty()) continue;
    std::vector<Point3> local;
    local.reserve(idx.size());
    for (auto i : idx) local.push_back(points[i]);
    const KdTree3 tree(local);
    parallel_for(idx.size(), threads, [&](std::size_t begin, std::size_t end) {
      KnnResult nn;
      std::vector<Point3> hood;
      for (std::size_t i = begin; i < end; ++i) {
        tree.knn(local[i], k, nn);
        hood.clear();
        for (auto j : nn.indices) hood.push_back(local[j]);
        const double v = hull_volume(hood);
        field.densities[idx[i]] =
            static_cast<double>(hood.size()) / std::max(v, vol_floor);
      }
    });
  }
  return field;
}

std::vector<double> rescale_removal(std::span<const std::size_t> counts,
                                    double min_remove, double max_remove) {
  std::vector<double> out(counts.size(), min_remove);
  if (counts.empty()) return out;
  const auto [lo, hi] = std::minmax_element(counts.begin(), counts.end());
  if (*lo == *hi) return out;
  const double n_min = static_cast<double>(*lo);
  const double range = static_cast<double>(*hi) - n_min;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    out[i] = (static_cast<double>(counts[i]) - n_min) / range *
                 (max_remove - min_remove) +
             min_remove;
  }
  return out;
}

ThresholdResult threshold_removal(std::span<const double> densities,
                                  double target_pct, ThresholdMode mode,
                                  double iter_step_frac) {
  ThresholdResult result;
  const std::size_t n = densities.size();
  if (n == 0 || target_pct <= 0.0) return result;

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return densities[a] < densities[b];
  });

  if (mode == ThresholdMode::kQuantile) {
    const std::size_t m = scheduled_count(target_pct, n);
    if (m == 0) return result;
    result.threshold = m < n ? densities[order[m]]
                             : std::nextafter(densities[order[n - 1]],
                                              std::numeric_limits<double>::infinity());
    result.removed.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(m));
    std::sort(result.removed.begin(), result.removed.end());
    return result;
  }

  // Iterative: tau_j = j * step, stopping at the first j whose removed
  // share reaches the target. The loop is evaluated in closed form since
  // the removed count only changes when tau passes a sorted density.
  const double exact = target_pct * static_cast<double>(n) / 100.0;
  const auto needed = std::min(n, static_cast<std::size_t>(std::ceil(exact - 1e-9)));
  if (needed == 0) return result;
  const double mean = std::accumulate(densities.begin(), densities.end(), 0.0) /
                      static_cast<double>(n);
  double var = 0.0;
  for (double d : densities) var += (d - mean) * (d - mean);
  double step = iter_step_frac * std::sqrt(var / static_cast<double>(n));
  if (!(step > 0.0)) {
    // Constant densities carry no spread to step by.
    step = iter_step_frac * std::abs(densities[order[n - 1]]);
  }
  const double pivot = densities[order[needed - 1]];
  double j = std::floor(pivot / step) + 1.0;
  while (j * step <= pivot) j += 1.0;  // rounding guard
  result.threshold = j * step;
  for (std::size_t i = 0; i < n; ++i) {
    if (densities[i] < result.threshold) result.removed.push_back(i);
  }
  return result;
}

FilterResult filter_map(const PointCloud& cloud, const DynaHullParams& params) {
  params.validate();
  const auto t_start = Clock::now();
  FilterResult out;

  auto t0 = Clock::now();
  if (params.ground.enabled && !cloud.empty()) {
    GroundParams gp = params.ground;
    gp.seed = params.seed;
    try {
      out.ground = segment_ground(cloud, gp);
      out.ground_found = true;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kNoGroundFound) throw;
      out.warnings.push_back(std::string("no ground plane found, continuing without ground split: ") +
                             e.what());
      warn(out.warnings.back());
    }
  }
  if (!out.ground_found) {
    out.ground = GroundSplit{};
    out.ground.nonground_indices.resize(cloud.size());
    std::iota(out.ground.nonground_indices.begin(),
              out.ground.nonground_indices.end(), std::size_t{0});
  }
  out.timings.ground_s = seconds_since(t0);

  const auto& ng_idx = out.ground.nonground_indices;
  const PointCloud nonground = cloud.subset(ng_idx);
  if (nonground.size() < params.k_neighbors) {
    throw Error(ErrorCode::kTooFewPoints,
                std::to_string(nonground.size()) +
                    " non-ground points is fewer than k=" +
                    std::to_string(params.k_neighbors));
  }

  t0 = Clock::now();
  const ClusterAssignment clusters =
      kmeans(nonground.points(), {params.n_clusters, params.seed,
                                  params.kmeans_max_iter, params.kmeans_tol});
  out.cluster_labels = clusters.labels;
  out.timings.clustering_s = seconds_since(t0);

  t0 = Clock::now();
  DensityField field =
      params.per_cluster_knn
          ? density_field_per_cluster(nonground.points(), clusters.labels,
                                      params.n_clusters, params.k_neighbors,
                                      params.vol_floor, params.threads)
          : density_field(nonground.points(), params.k_neighbors,
                          params.vol_floor, params.threads);
  out.densities = std::move(field.densities);
  out.timings.density_s = seconds_since(t0);

  t0 = Clock::now();
  const auto pct = rescale_removal(clusters.counts, params.min_remove, params.max_remove);
  std::vector<std::vector<std::size_t>> members(params.n_clusters);
  for (std::size_t i = 0; i < clusters.labels.size(); ++i) {
    members[clusters.labels[i]].push_back(i);
  }
  std::vector<char> removed(nonground.size(), 0);
  std::vector<double> local;
  for (std::size_t c = 0; c < params.n_clusters; ++c) {
    local.clear();
    for (auto i : members[c]) local.push_back(out.densities[i]);
    const auto th = threshold_removal(local, pct[c], params.threshold_mode,
                                      params.iter_step_frac);
    for (auto pos : th.removed) removed[members[c][pos]] = 1;
    ClusterRemoval cr;
    cr.count = clusters.counts[c];
    cr.removal_pct = pct[c];
    cr.threshold = th.threshold;
    cr.removed = th.removed.size();
    cr.mean_density = local.empty() ? 0.0
                                    : std::accumulate(local.begin(), local.end(), 0.0) /
                                          static_cast<double>(local.size());
    out.plan.push_back(cr);
  }

  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < nonground.size(); ++i) {
    if (removed[i]) {
      out.removed_indices.push_back(ng_idx[i]);
    } else {
      kept.push_back(ng_idx[i]);
    }
  }
  out.filtered = reattach_ground(cloud.subset(kept), cloud, out.ground);
  out.timings.threshold_s = seconds_since(t0);
  out.timings.total_s = seconds_since(t_start);
  return out;
}

}  // namespace dynahull
