// Copyright 2026 The DynaHull Authors.
// SPDX-License-Identifier: Apache-2.0

#include "dynahull/ground_segmentation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <random>

#include <Eigen/Eigenvalues>

#include "dynahull/error.hpp"

namespace dynahull {
namespace {

// Nearly collinear samples give an arbitrary normal that can slip
// through the slope gate, so the triangle's smallest altitude must reach
// `min_altitude`.
std::optional<Plane> plane_through(const Point3& a, const Point3& b,
                                   const Point3& c, double min_altitude) {
  Point3 n = cross(b - a, c - a);
  const double len = norm(n);
  const double longest =
      std::max({distance(a, b), distance(b, c), distance(c, a)});
  if (len <= 1e-12 || len < min_altitude * longest) return std::nullopt;
  n *= 1.0 / len;
  if (n.z < 0.0) n *= -1.0;
  return Plane{n, -dot(n, a)};
}

// Total least squares: normal is the eigenvector of the smallest
// covariance eigenvalue.
std::optional<Plane> fit_plane(const std::vector<Point3>& pts) {
  if (pts.size() < 3) return std::nullopt;
  Eigen::Vector3d mean = Eigen::Vector3d::Zero();
  for (const auto& p : pts) mean += Eigen::Vector3d(p.x, p.y, p.z);
  mean /= static_cast<double>(pts.size());
  Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
  for (const auto& p : pts) {
    const Eigen::Vector3d d = Eigen::Vector3d(p.x, p.y, p.z) - mean;
    cov += d * d.transpose();
  }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> solver(cov);
  if (solver.info() != Eigen::Success) return std::nullopt;
  Eigen::Vector3d n = solver.eigenvectors().col(0);
  if (n.z() < 0.0) n = -n;
  const Point3 normal{n.x(), n.y(), n.z()};
  return Plane{normal, -normal.x * mean.x() - normal.y * mean.y() - normal.z * mean.z()};
}

}  // namespace

GroundSplit segment_ground(const PointCloud& cloud, const GroundParams& params) {
  if (cloud.empty()) throw Error(ErrorCode::kEmptyCloud, "cannot segment an empty cloud");
  const auto pts = cloud.points();
  const std::size_t n = pts.size();

  std::vector<double> z(n);
  for (std::size_t i = 0; i < n; ++i) z[i] = pts[i].z;
  const auto pct = static_cast<std::ptrdiff_t>(0.01 * static_cast<double>(n - 1));
  std::nth_element(z.begin(), z.begin() + pct, z.end());
  const double z_ref = z[static_cast<std::size_t>(pct)];

  std::vector<std::size_t> cand;
  for (std::size_t i = 0; i < n; ++i) {
    if (std::abs(pts[i].z - z_ref) <= params.seed_band) cand.push_back(i);
  }
  if (cand.size() < 3) {
    throw Error(ErrorCode::kNoGroundFound,
                "fewer than 3 points in the ground candidate band");
  }

  const double min_nz = std::cos(params.max_slope_deg * std::numbers::pi / 180.0);
  auto count_inliers = [&](const Plane& pl) {
    std::size_t c = 0;
    for (auto i : cand) {
      if (std::abs(pl.signed_distance(pts[i])) <= params.inlier_eps) ++c;
    }
    return c;
  };

  std::mt19937_64 rng(params.seed);
  std::uniform_int_distribution<std::size_t> pick(0, cand.size() - 1);
  std::optional<Plane> best;
  std::size_t best_count = 0;
  for (std::size_t it = 0; it < params.ransac_iters; ++it) {
    const auto i = pick(rng), j = pick(rng), k = pick(rng);
    if (i == j || j == k || i == k) continue;
    auto pl = plane_through(pts[cand[i]], pts[cand[j]], pts[cand[k]],
                            params.inlier_eps);
    if (!pl || pl->normal.z < min_nz) continue;
    const auto c = count_inliers(*pl);
    if (c > best_count) {
      best_count = c;
      best = pl;
    }
  }
  if (!best || best_count < 3) {
    throw Error(ErrorCode::kNoGroundFound,
                "no plane within the slope limit has 3 inliers");
  }

  std::vector<Point3> inliers;
  for (auto i : cand) {
    if (std::abs(best->signed_distance(pts[i])) <= params.inlier_eps) {
      inliers.push_back(pts[i]);
    }
  }
  // Keep the sampled plane when the refit tilts past the slope gate.
  if (auto refit = fit_plane(inliers); refit && refit->normal.z >= min_nz) {
    best = refit;
  }

  GroundSplit split;
  split.plane = *best;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = best->signed_distance(pts[i]);
    if (d <= params.inlier_eps && d >= -params.inlier_eps) {
      split.ground_indices.push_back(i);
    } else {
      split.nonground_indices.push_back(i);
    }
  }
  return split;
}

GroundSplit segment_ceiling(const PointCloud& cloud, const GroundParams& params) {
  std::vector<Point3> flipped(cloud.points().begin(), cloud.points().end());
  for (auto& p : flipped) p.z = -p.z;
  GroundSplit split = segment_ground(PointCloud(std::move(flipped)), params);
  split.plane.normal.z = -split.plane.normal.z;
  return split;
}

PointCloud reattach_ground(const PointCloud& filtered_nonground,
                           const PointCloud& original, const GroundSplit& split) {
  if (split.ground_indices.empty()) return filtered_nonground;
  return concat(filtered_nonground, original.subset(split.ground_indices));
}

}  // namespace dynahull
