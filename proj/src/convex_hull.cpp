// Copyright 2026 The DynaHull Authors.
// SPDX-License-Identifier: Apache-2.0

#include "dynahull/convex_hull.hpp"

#include <algorithm>
#include <cmath>

namespace dynahull {
namespace {

constexpr std::uint32_t kNone = 0xffffffffu;

}  // namespace

std::uint32_t QuickHull::new_face(std::uint32_t a, std::uint32_t b,
                                  std::uint32_t c) {
  std::uint32_t id;
  if (!free_faces_.empty()) {
    id = free_faces_.back();
    free_faces_.pop_back();
  } else if (used_ < faces_.size()) {
    id = static_cast<std::uint32_t>(used_++);
  } else {
    faces_.emplace_back();
    id = static_cast<std::uint32_t>(used_++);
  }
  Face& f = faces_[id];
  f.v = {a, b, c};
  f.adj = {kNone, kNone, kNone};
  f.outside.clear();
  f.furthest = kNone;
  f.furthest_dist = 0.0;
  f.stamp = 0;
  f.visible = false;
  f.alive = true;
  set_plane(f);
  return id;
}

void QuickHull::set_plane(Face& f) const {
  const Point3& a = pts_[f.v[0]];
  Point3 n = cross(pts_[f.v[1]] - a, pts_[f.v[2]] - a);
  const double len = norm(n);
  // A zero-area face (eye within rounding of a horizon edge line) keeps a
  // zero normal: nothing is ever above it and it adds no volume.
  if (len > 0.0) n *= 1.0 / len;
  f.normal = n;
  f.offset = -dot(n, a);
}

void QuickHull::assign(std::uint32_t point,
                       std::span<const std::uint32_t> candidates) {
  const Point3& p = pts_[point];
  for (auto id : candidates) {
    Face& f = faces_[id];
    const double d = signed_distance(f, p);
    if (d > eps_) {
      f.outside.push_back(point);
      if (d > f.furthest_dist) {
        f.furthest_dist = d;
        f.furthest = point;
      }
      return;
    }
  }
  // Not above any candidate face: inside the current hull.
}

void QuickHull::drop_eye(Face& f) {
  std::erase(f.outside, f.furthest);
  f.furthest = kNone;
  f.furthest_dist = 0.0;
  for (auto p : f.outside) {
    const double d = signed_distance(f, pts_[p]);
    if (d > f.furthest_dist) {
      f.furthest_dist = d;
      f.furthest = p;
    }
  }
}

int QuickHull::run(std::span<const Point3> input) {
  pts_.assign(input.begin(), input.end());
  std::sort(pts_.begin(), pts_.end());
  pts_.erase(std::unique(pts_.begin(), pts_.end()), pts_.end());
  used_ = 0;
  free_faces_.clear();
  pending_.clear();

  const auto n = static_cast<std::uint32_t>(pts_.size());
  if (n <= 1) return 0;

  // Initialization: extreme points on each axis.
  std::array<std::uint32_t, 6> ext{};
  for (std::uint32_t i = 1; i < n; ++i) {
    const Point3& p = pts_[i];
    if (p.x < pts_[ext[0]].x) ext[0] = i;
    if (p.x > pts_[ext[1]].x) ext[1] = i;
    if (p.y < pts_[ext[2]].y) ext[2] = i;
    if (p.y > pts_[ext[3]].y) ext[3] = i;
    if (p.z < pts_[ext[4]].z) ext[4] = i;
    if (p.z > pts_[ext[5]].z) ext[5] = i;
  }
  const Point3 span_ext{pts_[ext[1]].x - pts_[ext[0]].x,
                        pts_[ext[3]].y - pts_[ext[2]].y,
                        pts_[ext[5]].z - pts_[ext[4]].z};
  eps_ = kHullRelativeEpsilon * norm(span_ext);

  std::uint32_t a = ext[0], b = ext[1];
  double best = -1.0;
  for (int i = 0; i < 6; ++i) {
    for (int j = i + 1; j < 6; ++j) {
      const double d = squared_distance(pts_[ext[i]], pts_[ext[j]]);
      if (d > best) {
        best = d;
        a = ext[i];
        b = ext[j];
      }
    }
  }
  if (std::sqrt(best) <= eps_) return 0;

  const Point3 pa = pts_[a];
  const Point3 ab = pts_[b] - pa;
  const double ab_len = norm(ab);
  std::uint32_t c = kNone;
  best = 0.0;
  for (std::uint32_t i = 0; i < n; ++i) {
    const double d = norm(cross(pts_[i] - pa, ab)) / ab_len;
    if (d > best) {
      best = d;
      c = i;
    }
  }
  if (c == kNone || best <= eps_) return 1;

  Point3 nabc = cross(ab, pts_[c] - pa);
  nabc *= 1.0 / norm(nabc);
  std::uint32_t d = kNone;
  best = 0.0;
  for (std::uint32_t i = 0; i < n; ++i) {
    const double dist = std::abs(dot(nabc, pts_[i] - pa));
    if (dist > best) {
      best = dist;
      d = i;
    }
  }
  if (d == kNone || best <= eps_) return 2;

  // Initial tetrahedron, each face wound so its opposite vertex is below.
  const std::array<std::uint32_t, 4> tet{a, b, c, d};
  std::array<std::uint32_t, 4> init{};
  for (int skip = 0; skip < 4; ++skip) {
    std::array<std::uint32_t, 3> v{};
    int k = 0;
    for (int i = 0; i < 4; ++i) {
      if (i != skip) v[k++] = tet[i];
    }
    auto id = new_face(v[0], v[1], v[2]);
    if (signed_distance(faces_[id], pts_[tet[skip]]) > 0.0) {
      std::swap(faces_[id].v[1], faces_[id].v[2]);
      set_plane(faces_[id]);
    }
    init[skip] = id;
  }
  for (auto fi : init) {
    for (int e = 0; e < 3; ++e) {
      const auto u = faces_[fi].v[e], w = faces_[fi].v[(e + 1) % 3];
      for (auto gi : init) {
        if (gi == fi) continue;
        const auto& g = faces_[gi].v;
        for (int j = 0; j < 3; ++j) {
          if (g[j] == w && g[(j + 1) % 3] == u) faces_[fi].adj[e] = gi;
        }
      }
    }
  }

  for (std::uint32_t i = 0; i < n; ++i) {
    if (i == a || i == b || i == c || i == d) continue;
    assign(i, init);
  }
  for (auto fi : init) {
    if (!faces_[fi].outside.empty()) pending_.push_back(fi);
  }

  edge_start_.assign(n, -1);
  // Face processing until no face sees an outside point.
  while (!pending_.empty()) {
    const auto fid = pending_.back();
    pending_.pop_back();
    if (!faces_[fid].alive || faces_[fid].outside.empty()) continue;
    add_point(fid);
  }
  return 3;
}

bool QuickHull::add_point(std::uint32_t fid) {
  const std::uint32_t eye = faces_[fid].furthest;
  const Point3 p = pts_[eye];

  // Visible faces by flood fill from the seed face; every edge between a
  // visible and a hidden face is a horizon edge.
  ++stamp_;
  visible_.clear();
  horizon_.clear();
  dfs_.clear();
  faces_[fid].stamp = stamp_;
  faces_[fid].visible = true;
  visible_.push_back(fid);
  dfs_.push_back(fid);
  while (!dfs_.empty()) {
    const auto cur = dfs_.back();
    dfs_.pop_back();
    for (int i = 0; i < 3; ++i) {
      const auto g = faces_[cur].adj[i];
      Face& gf = faces_[g];
      if (gf.stamp != stamp_) {
        gf.stamp = stamp_;
        gf.visible = signed_distance(gf, p) > eps_;
        if (gf.visible) {
          visible_.push_back(g);
          dfs_.push_back(g);
        }
      }
      if (!gf.visible) {
        horizon_.push_back({faces_[cur].v[i], faces_[cur].v[(i + 1) % 3], g});
      }
    }
  }

  // The horizon must be one simple loop. Rounding can break that on nearly
  // coplanar input; the eye is then treated as lying on the hull.
  bool ok = !horizon_.empty();
  for (std::size_t k = 0; k < horizon_.size() && ok; ++k) {
    auto& slot = edge_start_[horizon_[k].from];
    if (slot != -1) ok = false;
    slot = static_cast<std::int32_t>(k);
  }
  loop_.clear();
  if (ok) {
    std::int32_t k = 0;
    do {
      loop_.push_back(horizon_[static_cast<std::size_t>(k)]);
      k = edge_start_[horizon_[static_cast<std::size_t>(k)].to];
    } while (k > 0 && loop_.size() <= horizon_.size());
    ok = k == 0 && loop_.size() == horizon_.size();
  }
  for (const auto& e : horizon_) edge_start_[e.from] = -1;
  if (!ok) {
    drop_eye(faces_[fid]);
    if (!faces_[fid].outside.empty()) pending_.push_back(fid);
    return false;
  }

  // New faces fan from the eye over the horizon loop.
  const std::size_t h = loop_.size();
  new_faces_.clear();
  for (const auto& e : loop_) new_faces_.push_back(new_face(e.from, e.to, eye));
  for (std::size_t k = 0; k < h; ++k) {
    const auto nf = new_faces_[k];
    faces_[nf].adj = {loop_[k].neighbor, new_faces_[(k + 1) % h],
                      new_faces_[(k + h - 1) % h]};
    Face& g = faces_[loop_[k].neighbor];
    for (int j = 0; j < 3; ++j) {
      if (g.v[j] == loop_[k].to && g.v[(j + 1) % 3] == loop_[k].from) {
        g.adj[j] = nf;
      }
    }
  }

  orphans_.clear();
  for (auto vf : visible_) {
    Face& f = faces_[vf];
    f.alive = false;
    for (auto q : f.outside) {
      if (q != eye) orphans_.push_back(q);
    }
    f.outside.clear();
    free_faces_.push_back(vf);
  }
  for (auto q : orphans_) assign(q, new_faces_);
  for (auto nf : new_faces_) {
    if (!faces_[nf].outside.empty()) pending_.push_back(nf);
  }
  return true;
}

double QuickHull::accumulate_volume() const {
  // Reference point: centroid of the hull vertices, strictly interior, so
  // every tetrahedron (face, centroid) has non-negative orientation and the
  // absolute-value sum is exact.
  Point3 centroid;
  std::size_t count = 0;
  std::vector<char> seen(pts_.size(), 0);
  for (std::size_t i = 0; i < used_; ++i) {
    if (!faces_[i].alive) continue;
    for (auto v : faces_[i].v) {
      if (!seen[v]) {
        seen[v] = 1;
        centroid += pts_[v];
        ++count;
      }
    }
  }
  centroid *= 1.0 / static_cast<double>(count);
  double sum = 0.0;
  for (std::size_t i = 0; i < used_; ++i) {
    const Face& f = faces_[i];
    if (!f.alive) continue;
    const Point3 a = pts_[f.v[0]] - centroid;
    const Point3 b = pts_[f.v[1]] - centroid;
    const Point3 c = pts_[f.v[2]] - centroid;
    sum += std::abs(dot(a, cross(b, c)));
  }
  return sum / 6.0;
}

HullOutcome QuickHull::build(std::span<const Point3> points) {
  const int rank = run(points);
  if (rank < 3) return DegenerateHull{rank};

  HullMesh mesh;
  std::vector<std::uint32_t> remap(pts_.size(), kNone);
  for (std::size_t i = 0; i < used_; ++i) {
    const Face& f = faces_[i];
    if (!f.alive) continue;
    std::array<std::uint32_t, 3> tri{};
    for (int k = 0; k < 3; ++k) {
      auto& r = remap[f.v[k]];
      if (r == kNone) {
        r = static_cast<std::uint32_t>(mesh.vertices.size());
        mesh.vertices.push_back(pts_[f.v[k]]);
      }
      tri[k] = r;
    }
    mesh.faces.push_back(tri);
  }
  mesh.volume = accumulate_volume();
  return mesh;
}

double QuickHull::volume(std::span<const Point3> points) {
  return run(points) < 3 ? 0.0 : accumulate_volume();
}

HullOutcome convex_hull_3d(std::span<const Point3> points) {
  QuickHull qh;
  return qh.build(points);
}

double hull_volume(std::span<const Point3> points) {
  thread_local QuickHull qh;
  return qh.volume(points);
}

}  // namespace dynahull
