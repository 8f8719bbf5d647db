// Copyright 2026 The DynaHull Authors.
// SPDX-License-Identifier: Apache-2.0

#include "dynahull/kmeans.hpp"

#include <algorithm>
#include <limits>
#include <random>
#include <string>

#include "dynahull/error.hpp"

namespace dynahull {
namespace {

std::pair<std::uint32_t, double> nearest_centroid(
    const Point3& p, const std::vector<Point3>& centroids) {
  std::uint32_t best = 0;
  double best_d = squared_distance(p, centroids[0]);
  for (std::uint32_t c = 1; c < centroids.size(); ++c) {
    const double d = squared_distance(p, centroids[c]);
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  return {best, best_d};
}

std::vector<Point3> kmeans_plus_plus(std::span<const Point3> points,
                                     std::size_t k, std::mt19937_64& rng) {
  const std::size_t n = points.size();
  std::vector<Point3> centroids;
  centroids.reserve(k);
  centroids.push_back(
      points[std::uniform_int_distribution<std::size_t>(0, n - 1)(rng)]);
  std::vector<double> d2(n);
  for (std::size_t i = 0; i < n; ++i) d2[i] = squared_distance(points[i], centroids[0]);

  while (centroids.size() < k) {
    double total = 0.0;
    for (double v : d2) total += v;
    std::size_t pick = 0;
    if (total > 0.0) {
      const double r = std::uniform_real_distribution<double>(0.0, total)(rng);
      double acc = 0.0;
      pick = n - 1;
      for (std::size_t i = 0; i < n; ++i) {
        acc += d2[i];
        if (acc > r && d2[i] > 0.0) {
          pick = i;
          break;
        }
      }
    } else {
      // Every point coincides with a chosen centroid.
      pick = std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
    }
    centroids.push_back(points[pick]);
    for (std::size_t i = 0; i < n; ++i) {
      d2[i] = std::min(d2[i], squared_distance(points[i], centroids.back()));
    }
  }
  return centroids;
}

}  // namespace

ClusterAssignment kmeans(std::span<const Point3> points,
                         const KMeansParams& params) {
  const std::size_t n = points.size();
  const std::size_t k = params.n_clusters;
  if (k == 0) throw Error(ErrorCode::kInvalidArgument, "n_clusters must be >= 1");
  if (k > n) {
    throw Error(ErrorCode::kInsufficientPoints,
                std::to_string(k) + " clusters requested for " +
                    std::to_string(n) + " points");
  }

  std::mt19937_64 rng(params.seed);
  ClusterAssignment out;
  out.centroids = kmeans_plus_plus(points, k, rng);
  out.labels.assign(n, 0);

  std::vector<double> dist(n);
  auto assign_all = [&] {
    double wcss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const auto [c, d] = nearest_centroid(points[i], out.centroids);
      out.labels[i] = c;
      dist[i] = d;
      wcss += d;
    }
    out.wcss_history.push_back(wcss);
  };

  assign_all();
  std::vector<Point3> sums(k);
  std::vector<std::size_t> counts(k);
  for (std::size_t iter = 0; iter < params.max_iter; ++iter) {
    std::fill(sums.begin(), sums.end(), Point3{});
    std::fill(counts.begin(), counts.end(), 0);
    // Sequential reduction in point order keeps the result independent of
    // any parallelism elsewhere.
    for (std::size_t i = 0; i < n; ++i) {
      sums[out.labels[i]] += points[i];
      ++counts[out.labels[i]];
    }
    double shift = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
      Point3 next;
      if (counts[c] > 0) {
        next = sums[c] * (1.0 / static_cast<double>(counts[c]));
      } else {
        std::size_t far = 0;
        for (std::size_t i = 1; i < n; ++i) {
          if (dist[i] > dist[far]) far = i;
        }
        next = points[far];
        dist[far] = 0.0;
      }
      shift = std::max(shift, distance(next, out.centroids[c]));
      out.centroids[c] = next;
    }
    assign_all();
    out.iterations = iter + 1;
    if (shift < params.tol) break;
  }

  out.counts.assign(k, 0);
  for (auto l : out.labels) ++out.counts[l];
  return out;
}

}  // namespace dynahull
