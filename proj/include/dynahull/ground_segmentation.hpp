// Copyright 2026 The DynaHull Authors.
// SPDX-License-Identifier: Apache-2.0
//
// Floor separation: a seeded robust plane fit restricted to the lowest
// band of the cloud, gated on slope.

#ifndef DYNAHULL_GROUND_SEGMENTATION_HPP_
#define DYNAHULL_GROUND_SEGMENTATION_HPP_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "dynahull/point_cloud.hpp"

namespace dynahull {

struct GroundParams {
  bool enabled = true;
  double seed_band = 0.3;     // meters around the 1st-percentile height
  double inlier_eps = 0.05;   // meters
  double max_slope_deg = 15.0;
  std::size_t ransac_iters = 200;
  std::uint64_t seed = 0;
};

// n.p + d = 0 for points on the plane; n is unit length with n.z > 0.
struct Plane {
  Point3 normal{0.0, 0.0, 1.0};
  double offset = 0.0;

  double signed_distance(const Point3& p) const { return dot(normal, p) + offset; }
};

struct GroundSplit {
  std::vector<std::size_t> ground_indices;     // ascending
  std::vector<std::size_t> nonground_indices;  // ascending
  Plane plane;
};

// Throws Error(kNoGroundFound) when no plane within the slope limit has at
// least 3 inliers, Error(kEmptyCloud) for an empty cloud.
GroundSplit segment_ground(const PointCloud& cloud, const GroundParams& params);

// filtered_nonground followed by the ground points of `original`.
PointCloud reattach_ground(const PointCloud& filtered_nonground,
                           const PointCloud& original, const GroundSplit& split);

// Same procedure mirrored in z: finds the ceiling plane instead of the floor.
GroundSplit segment_ceiling(const PointCloud& cloud, const GroundParams& params);

}  // namespace dynahull

#endif  // DYNAHULL_GROUND_SEGMENTATION_HPP_
