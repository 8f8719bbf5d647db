// Copyright 2026 The DynaHull Authors.
// SPDX-License-Identifier: Apache-2.0

#include "dynahull/point_cloud.hpp"

#include <algorithm>
#include <string>
#include <utility>

#include "dynahull/error.hpp"

namespace dynahull {

PointCloud::PointCloud(std::vector<Point3> points,
                       std::optional<std::vector<MotionLabel>> labels)
    : points_(std::move(points)), labels_(std::move(labels)) {
  if (labels_ && labels_->size() != points_.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "label count " + std::to_string(labels_->size()) +
                    " does not match point count " +
                    std::to_string(points_.size()));
  }
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (!points_[i].is_finite()) {
      throw Error(ErrorCode::kNonFiniteCoordinate,
                  "non-finite coordinate at point " + std::to_string(i));
    }
  }
}

PointCloud PointCloud::subset(std::span<const std::size_t> indices) const {
  PointCloud out;
  out.points_.reserve(indices.size());
  for (auto i : indices) out.points_.push_back(points_.at(i));
  if (labels_) {
    out.labels_.emplace();
    out.labels_->reserve(indices.size());
    for (auto i : indices) out.labels_->push_back((*labels_)[i]);
  }
  return out;
}

PointCloud PointCloud::with_labels(
    std::optional<std::vector<MotionLabel>> labels) const {
  return PointCloud(points_, std::move(labels));
}

std::size_t PointCloud::count(MotionLabel label) const {
  if (!labels_) return 0;
  return static_cast<std::size_t>(
      std::count(labels_->begin(), labels_->end(), label));
}

PointCloud concat(const PointCloud& a, const PointCloud& b) {
  std::vector<Point3> pts(a.points().begin(), a.points().end());
  pts.insert(pts.end(), b.points().begin(), b.points().end());
  std::optional<std::vector<MotionLabel>> labels;
  if (a.has_labels() && b.has_labels()) {
    labels = *a.labels();
    labels->insert(labels->end(), b.labels()->begin(), b.labels()->end());
  }
  return PointCloud(std::move(pts), std::move(labels));
}

}  // namespace dynahull
