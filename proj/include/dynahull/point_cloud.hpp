// Copyright 2026 The DynaHull Authors.
// SPDX-License-Identifier: Apache-2.0
//
// Core point cloud types shared by every stage of the pipeline.

#ifndef DYNAHULL_POINT_CLOUD_HPP_
#define DYNAHULL_POINT_CLOUD_HPP_

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace dynahull {

struct Point3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend bool operator==(const Point3&, const Point3&) = default;
  friend auto operator<=>(const Point3&, const Point3&) = default;

  Point3& operator+=(const Point3& o) {
    x += o.x;
    y += o.y;
    z += o.z;
    return *this;
  }
  Point3& operator-=(const Point3& o) {
    x -= o.x;
    y -= o.y;
    z -= o.z;
    return *this;
  }
  Point3& operator*=(double s) {
    x *= s;
    y *= s;
    z *= s;
    return *this;
  }

  bool is_finite() const {
    return std::isfinite(x) && std::isfinite(y) && std::isfinite(z);
  }
};

inline Point3 operator+(Point3 a, const Point3& b) { return a += b; }
inline Point3 operator-(Point3 a, const Point3& b) { return a -= b; }
inline Point3 operator*(Point3 a, double s) { return a *= s; }
inline Point3 operator*(double s, Point3 a) { return a *= s; }

inline double dot(const Point3& a, const Point3& b) {
  return a.x * b.x + a.y * b.y + a.z * b.z;
}

inline Point3 cross(const Point3& a, const Point3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline double norm(const Point3& a) { return std::sqrt(dot(a, a)); }

// Every Euclidean distance in the library goes through this expression so
// that independent brute-force checks reproduce it bit-for-bit.
inline double squared_distance(const Point3& a, const Point3& b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  const double dz = a.z - b.z;
  return dx * dx + dy * dy + dz * dz;
}

inline double distance(const Point3& a, const Point3& b) {
  return std::sqrt(squared_distance(a, b));
}

// Serialized as 0 = Static, 1 = Dynamic.
enum class MotionLabel : std::uint8_t { kStatic = 0, kDynamic = 1 };

// Ordered 3D points (meters) with optional per-point motion labels.
// Immutable once constructed; derive new clouds with subset()/concat().
class PointCloud {
 public:
  PointCloud() = default;
  // Throws Error(kNonFiniteCoordinate) on NaN/Inf and
  // Error(kInvalidArgument) when labels and points disagree in length.
  explicit PointCloud(std::vector<Point3> points,
                      std::optional<std::vector<MotionLabel>> labels = {});

  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }
  const Point3& operator[](std::size_t i) const { return points_[i]; }

  std::span<const Point3> points() const { return points_; }
  bool has_labels() const { return labels_.has_value(); }
  const std::optional<std::vector<MotionLabel>>& labels() const {
    return labels_;
  }

  // Points at `indices`, in the order given; labels follow.
  PointCloud subset(std::span<const std::size_t> indices) const;
  PointCloud with_labels(std::optional<std::vector<MotionLabel>> labels) const;

  std::size_t count(MotionLabel label) const;

  friend bool operator==(const PointCloud&, const PointCloud&) = default;

 private:
  std::vector<Point3> points_;
  std::optional<std::vector<MotionLabel>> labels_;
};

// a followed by b. The result carries labels only when both inputs do.
PointCloud concat(const PointCloud& a, const PointCloud& b);

}  // namespace dynahull

#endif  // DYNAHULL_POINT_CLOUD_HPP_
