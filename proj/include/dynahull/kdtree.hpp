// Copyright 2026 The DynaHull Authors.
// SPDX-License-Identifier: Apache-2.0
//
// Exact k-nearest-neighbor search over a static 3D point set.

#ifndef DYNAHULL_KDTREE_HPP_
#define DYNAHULL_KDTREE_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "dynahull/point_cloud.hpp"

namespace dynahull {

struct KnnResult {
  std::vector<std::size_t> indices;
  std::vector<double> distances;  // meters, non-decreasing

  std::size_t size() const { return indices.size(); }
};

// Balanced k-d tree. Queries return indices into the sequence the tree was
// built from, ordered by ascending distance with ties broken by ascending
// index. Immutable after construction; concurrent queries are safe.
class KdTree3 {
 public:
  KdTree3() = default;
  explicit KdTree3(std::span<const Point3> points);

  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }

  // Up to k nearest points (fewer when the tree holds fewer than k). A tree
  // point equal to the query is included at distance 0.
  KnnResult knn(const Point3& query, std::size_t k) const;
  void knn(const Point3& query, std::size_t k, KnnResult& out) const;

  // Index and squared distance of the nearest point. Tree must be non-empty.
  std::pair<std::size_t, double> nearest(const Point3& query) const;

 private:
  struct Node {
    // Leaf: [begin, end) into points_. Inner: split on `axis` at `split`.
    std::uint32_t begin = 0;
    std::uint32_t end = 0;
    std::uint32_t left = 0;
    std::uint32_t right = 0;
    double split = 0.0;
    std::int8_t axis = -1;  // -1 marks a leaf
  };

  using Candidate = std::pair<double, std::size_t>;  // (squared dist, index)

  std::uint32_t build(std::uint32_t begin, std::uint32_t end);
  void search(std::uint32_t node, const Point3& q, std::size_t k,
              std::vector<Candidate>& heap) const;

  std::vector<Point3> points_;        // tree order
  std::vector<std::size_t> indices_;  // tree order -> source index
  std::vector<Node> nodes_;
};

}  // namespace dynahull

#endif  // DYNAHULL_KDTREE_HPP_
