// Copyright 2026 The DynaHull Authors.
// SPDX-License-Identifier: Apache-2.0
//
// 3D convex hull by Quickhull, and hull volume as a sum of tetrahedra
// around an interior reference point.

#ifndef DYNAHULL_CONVEX_HULL_HPP_
#define DYNAHULL_CONVEX_HULL_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "dynahull/point_cloud.hpp"

namespace dynahull {

// Closed triangulated hull. Faces index into `vertices` and are wound
// counter-clockwise seen from outside, so (b - a) x (c - a) points outward.
struct HullMesh {
  std::vector<Point3> vertices;
  std::vector<std::array<std::uint32_t, 3>> faces;
  double volume = 0.0;
};

// Affine rank of an input with no non-degenerate hull (0 = a single
// distinct point, 1 = collinear, 2 = coplanar).
struct DegenerateHull {
  int rank = 0;
};

using HullOutcome = std::variant<HullMesh, DegenerateHull>;

// Relative tolerance for above-plane tests, scaled by the bounding-box
// diagonal of the input.
inline constexpr double kHullRelativeEpsilon = 1e-9;

// Reusable Quickhull workspace. One instance per thread; build() and
// volume() may be called any number of times.
class QuickHull {
 public:
  HullOutcome build(std::span<const Point3> points);

  // Hull volume in cubic meters; 0 for degenerate inputs. Skips the mesh
  // export that build() performs.
  double volume(std::span<const Point3> points);

 private:
  struct Face {
    std::array<std::uint32_t, 3> v{};
    std::array<std::uint32_t, 3> adj{};  // adj[i] lies across v[i] -> v[i+1]
    Point3 normal;
    double offset = 0.0;
    std::vector<std::uint32_t> outside;
    std::uint32_t furthest = 0;
    double furthest_dist = 0.0;
    std::uint64_t stamp = 0;
    bool visible = false;
    bool alive = false;
  };

  struct HorizonEdge {
    std::uint32_t from;
    std::uint32_t to;
    std::uint32_t neighbor;
  };

  // Returns the affine rank (< 3 means degenerate, hull not built).
  int run(std::span<const Point3> input);
  std::uint32_t new_face(std::uint32_t a, std::uint32_t b, std::uint32_t c);
  void set_plane(Face& f) const;
  double signed_distance(const Face& f, const Point3& p) const {
    return dot(f.normal, p) + f.offset;
  }
  void assign(std::uint32_t point, std::span<const std::uint32_t> candidates);
  bool add_point(std::uint32_t face_id);
  void drop_eye(Face& f);
  double accumulate_volume() const;

  std::vector<Point3> pts_;
  std::vector<Face> faces_;
  std::vector<std::uint32_t> free_faces_;
  std::vector<std::uint32_t> pending_;
  std::vector<std::uint32_t> visible_;
  std::vector<std::uint32_t> dfs_;
  std::vector<HorizonEdge> horizon_;
  std::vector<HorizonEdge> loop_;
  std::vector<std::uint32_t> new_faces_;
  std::vector<std::uint32_t> orphans_;
  std::vector<std::int32_t> edge_start_;  // vertex -> horizon edge, or -1
  std::size_t used_ = 0;                  // face slots in use this run
  std::uint64_t stamp_ = 0;
  double eps_ = 0.0;
};

HullOutcome convex_hull_3d(std::span<const Point3> points);

// Uses a thread-local QuickHull workspace.
double hull_volume(std::span<const Point3> points);

}  // namespace dynahull

#endif  // DYNAHULL_CONVEX_HULL_HPP_
