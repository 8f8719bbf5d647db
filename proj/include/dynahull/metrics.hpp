// Copyright 2026 The DynaHull Authors.
// SPDX-License-Identifier: Apache-2.0
//
// Map-versus-reference evaluation: nearest-neighbor distance statistics,
// Chamfer distance, exact Earth Mover's distance on downsampled clouds, and
// confusion counts against per-point motion labels.

#ifndef DYNAHULL_METRICS_HPP_
#define DYNAHULL_METRICS_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <json.hpp>

#include "dynahull/point_cloud.hpp"

namespace dynahull {

struct DistanceStats {
  double mean = 0.0;
  double mae = 0.0;
  double variance = 0.0;  // population
  double rmse = 0.0;
  double p90 = 0.0;
};

struct ConfusionReport {
  std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
  double fp_pct = 0.0;     // share of static points removed
  double fn_pct = 0.0;     // share of dynamic points kept
  double precision = 0.0;  // 0 when nothing was removed
  double recall = 0.0;     // 0 when there are no dynamic points
};

struct MetricsReport {
  DistanceStats distance;
  double chamfer = 0.0;
  double emd = 0.0;
  std::optional<ConfusionReport> confusion;
  double runtime_s = 0.0;
};

// Linear interpolation between closest ranks; `values` need not be sorted.
double percentile(std::vector<double> values, double pct);

// Distance from each pred point to its nearest truth point.
// Throws Error(kEmptyCloud) if either cloud is empty.
DistanceStats nn_distance_stats(const PointCloud& pred, const PointCloud& truth,
                                std::size_t threads = 1);

// Mean squared nn-distance a->b plus b->a. Symmetric bit-for-bit.
double chamfer(const PointCloud& a, const PointCloud& b, std::size_t threads = 1);

// Both clouds are downsampled to n = min(n_samples, |a|, |b|) with the same
// seed, then matched by an exact assignment under Euclidean cost.
// Returns the mean matched distance.
double emd(const PointCloud& a, const PointCloud& b, std::size_t n_samples,
           std::uint64_t seed);

// Positive class is Dynamic. Throws Error(kIndexOutOfRange) for removed
// indices outside labels.
ConfusionReport confusion(std::span<const MotionLabel> labels,
                          std::span<const std::size_t> removed);

// Fixed-key JSON object; numbers rounded to 6 significant digits.
nlohmann::json to_json(const MetricsReport& report);
nlohmann::json to_json(const ConfusionReport& report);

// v rounded to `digits` significant decimal digits.
double round_significant(double v, int digits = 6);

}  // namespace dynahull

#endif  // DYNAHULL_METRICS_HPP_
