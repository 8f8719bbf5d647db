// Copyright 2026 The DynaHull Authors.
// SPDX-License-Identifier: Apache-2.0

#include "dynahull/kdtree.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace dynahull {
namespace {

constexpr std::uint32_t kLeafSize = 12;

double coord(const Point3& p, int axis) {
  return axis == 0 ? p.x : axis == 1 ? p.y : p.z;
}

}  // namespace

KdTree3::KdTree3(std::span<const Point3> points)
    : points_(points.begin(), points.end()), indices_(points.size()) {
  std::iota(indices_.begin(), indices_.end(), std::size_t{0});
  if (points_.empty()) return;
  nodes_.reserve(2 * (points_.size() / kLeafSize + 1));
  build(0, static_cast<std::uint32_t>(points_.size()));
}

std::uint32_t KdTree3::build(std::uint32_t begin, std::uint32_t end) {
  const auto id = static_cast<std::uint32_t>(nodes_.size());
  nodes_.push_back({begin, end, 0, 0, 0.0, -1});
  if (end - begin <= kLeafSize) return id;

  Point3 lo = points_[begin], hi = points_[begin];
  for (auto i = begin; i < end; ++i) {
    const auto& p = points_[i];
    lo = {std::min(lo.x, p.x), std::min(lo.y, p.y), std::min(lo.z, p.z)};
    hi = {std::max(hi.x, p.x), std::max(hi.y, p.y), std::max(hi.z, p.z)};
  }
  const Point3 ext = hi - lo;
  const int axis = ext.x >= ext.y && ext.x >= ext.z ? 0 : (ext.y >= ext.z ? 1 : 2);
  if (coord(ext, axis) == 0.0) return id;  // all coincident: keep as leaf

  // Median split via nth_element over a permutation, so points_ and
  // indices_ move together.
  const std::uint32_t mid = begin + (end - begin) / 2;
  std::vector<std::uint32_t> perm(end - begin);
  std::iota(perm.begin(), perm.end(), begin);
  std::nth_element(perm.begin(), perm.begin() + (mid - begin), perm.end(),
                   [&](std::uint32_t a, std::uint32_t b) {
                     const double ca = coord(points_[a], axis);
                     const double cb = coord(points_[b], axis);
                     return ca < cb || (ca == cb && indices_[a] < indices_[b]);
                   });
  std::vector<Point3> pts(perm.size());
  std::vector<std::size_t> idx(perm.size());
  for (std::size_t i = 0; i < perm.size(); ++i) {
    pts[i] = points_[perm[i]];
    idx[i] = indices_[perm[i]];
  }
  std::copy(pts.begin(), pts.end(), points_.begin() + begin);
  std::copy(idx.begin(), idx.end(), indices_.begin() + begin);

  const double split = coord(points_[mid], axis);
  const auto left = build(begin, mid);
  const auto right = build(mid, end);
  auto& node = nodes_[id];
  node.axis = static_cast<std::int8_t>(axis);
  node.split = split;
  node.left = left;
  node.right = right;
  return id;
}

void KdTree3::search(std::uint32_t node_id, const Point3& q, std::size_t k,
                     std::vector<Candidate>& heap) const {
  const Node& node = nodes_[node_id];
  if (node.axis < 0) {
    for (auto i = node.begin; i < node.end; ++i) {
      const Candidate c{squared_distance(points_[i], q), indices_[i]};
      if (heap.size() < k) {
        heap.push_back(c);
        std::push_heap(heap.begin(), heap.end());
      } else if (c < heap.front()) {
        std::pop_heap(heap.begin(), heap.end());
        heap.back() = c;
        std::push_heap(heap.begin(), heap.end());
      }
    }
    return;
  }
  const double diff = coord(q, node.axis) - node.split;
  const auto near = diff < 0.0 ? node.left : node.right;
  const auto far = diff < 0.0 ? node.right : node.left;
  search(near, q, k, heap);
  // <= keeps equal-distance candidates on the far side reachable for the
  // index tie-break.
  if (heap.size() < k || diff * diff <= heap.front().first) {
    search(far, q, k, heap);
  }
}

void KdTree3::knn(const Point3& query, std::size_t k, KnnResult& out) const {
  out.indices.clear();
  out.distances.clear();
  if (points_.empty() || k == 0) return;
  thread_local std::vector<Candidate> heap;
  heap.clear();
  heap.reserve(k);
  search(0, query, k, heap);
  std::sort_heap(heap.begin(), heap.end());
  out.indices.reserve(heap.size());
  out.distances.reserve(heap.size());
  for (const auto& [d2, i] : heap) {
    out.indices.push_back(i);
    out.distances.push_back(std::sqrt(d2));
  }
}

KnnResult KdTree3::knn(const Point3& query, std::size_t k) const {
  KnnResult r;
  knn(query, k, r);
  return r;
}

std::pair<std::size_t, double> KdTree3::nearest(const Point3& query) const {
  thread_local std::vector<Candidate> heap;
  heap.clear();
  search(0, query, 1, heap);
  return {heap.front().second, heap.front().first};
}

}  // namespace dynahull
