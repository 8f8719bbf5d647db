// Copyright 2026 The DynaHull Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef DYNAHULL_KMEANS_HPP_
#define DYNAHULL_KMEANS_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "dynahull/point_cloud.hpp"

namespace dynahull {

struct KMeansParams {
  std::size_t n_clusters = 5;
  std::uint64_t seed = 0;
  std::size_t max_iter = 100;
  double tol = 1e-4;  // meters of centroid motion
};

struct ClusterAssignment {
  std::vector<std::uint32_t> labels;  // one cluster id per point
  std::vector<Point3> centroids;
  std::vector<std::size_t> counts;
  // Within-cluster sum of squares after each assignment step.
  std::vector<double> wcss_history;
  std::size_t iterations = 0;
};

// Lloyd iterations from a seeded k-means++ start, on full 3D coordinates.
// Ties between equidistant centroids go to the lower cluster id. A cluster
// that empties is re-seeded at the point farthest from its own centroid.
// Throws Error(kInsufficientPoints) when n_clusters exceeds the point
// count, Error(kInvalidArgument) for n_clusters == 0.
ClusterAssignment kmeans(std::span<const Point3> points,
                         const KMeansParams& params);

}  // namespace dynahull

#endif  // DYNAHULL_KMEANS_HPP_
