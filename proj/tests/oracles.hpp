// Copyright 2026 The DynaHull Authors.
// SPDX-License-Identifier: Apache-2.0
//
// Slow, obviously-correct reference implementations and seeded
// generators used by the unit tests and the acceptance runner. Nothing
// here calls into the library's geometry code.

#ifndef DYNAHULL_TESTS_ORACLES_HPP_
#define DYNAHULL_TESTS_ORACLES_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <utility>
#include <vector>

#include "dynahull/point_cloud.hpp"

namespace oracle {

using dynahull::Point3;

// splitmix64; small, fast, and good enough for test data.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(next() % n); }
  double normal() {
    // Box-Muller, one value per call.
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * uniform());
  }

 private:
  std::uint64_t state_;
};

inline std::vector<Point3> random_box(Rng& rng, std::size_t n, double lo = -1.0,
                                      double hi = 1.0) {
  std::vector<Point3> pts(n);
  for (auto& p : pts) p = {rng.uniform(lo, hi), rng.uniform(lo, hi), rng.uniform(lo, hi)};
  return pts;
}

// Points on an axis-aligned ellipsoid surface: every point is extreme.
inline std::vector<Point3> random_ellipsoid_surface(Rng& rng, std::size_t n,
                                                    Point3 radii, Point3 center) {
  std::vector<Point3> pts;
  while (pts.size() < n) {
    const double x = rng.normal(), y = rng.normal(), z = rng.normal();
    const double r = std::sqrt(x * x + y * y + z * z);
    if (r < 1e-9) continue;
    pts.push_back({center.x + radii.x * x / r, center.y + radii.y * y / r,
                   center.z + radii.z * z / r});
  }
  return pts;
}

inline double sq(const Point3& a, const Point3& b) {
  const double dx = a.x - b.x, dy = a.y - b.y, dz = a.z - b.z;
  return dx * dx + dy * dy + dz * dz;
}

// Full scan, sorted by (distance, index).
inline std::vector<std::pair<double, std::size_t>> knn(const std::vector<Point3>& pts,
                                                       const Point3& q, std::size_t k) {
  std::vector<std::pair<double, std::size_t>> all(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) all[i] = {sq(pts[i], q), i};
  k = std::min(k, all.size());
  std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(k), all.end());
  all.resize(k);
  for (auto& e : all) e.first = std::sqrt(e.first);
  return all;
}

inline double nearest_sq(const std::vector<Point3>& pts, const Point3& q) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& p : pts) best = std::min(best, sq(p, q));
  return best;
}

inline double chamfer(const std::vector<Point3>& a, const std::vector<Point3>& b) {
  double sa = 0.0, sb = 0.0;
  for (const auto& p : a) sa += nearest_sq(b, p);
  for (const auto& p : b) sb += nearest_sq(a, p);
  return sa / static_cast<double>(a.size()) + sb / static_cast<double>(b.size());
}

struct Stats {
  double mean, variance, rmse, p90;
};

inline Stats nn_stats(const std::vector<Point3>& pred, const std::vector<Point3>& truth) {
  std::vector<double> d;
  for (const auto& p : pred) d.push_back(std::sqrt(nearest_sq(truth, p)));
  const double n = static_cast<double>(d.size());
  Stats s{};
  for (double v : d) s.mean += v / n;
  for (double v : d) s.variance += (v - s.mean) * (v - s.mean) / n;
  for (double v : d) s.rmse += v * v / n;
  s.rmse = std::sqrt(s.rmse);
  std::sort(d.begin(), d.end());
  const double pos = 0.9 * (n - 1.0);
  const auto lo = static_cast<std::size_t>(pos);
  const std::size_t hi = std::min(lo + 1, d.size() - 1);
  s.p90 = d[lo] + (pos - static_cast<double>(lo)) * (d[hi] - d[lo]);
  return s;
}

// Minimum mean matching cost over every permutation.
inline double emd_permutation(const std::vector<Point3>& a, const std::vector<Point3>& b) {
  std::vector<std::size_t> perm(a.size());
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  double best = std::numeric_limits<double>::infinity();
  do {
    double c = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) c += std::sqrt(sq(a[i], b[perm[i]]));
    best = std::min(best, c);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best / static_cast<double>(a.size());
}

// Hull facets by exhaustive triple enumeration: a triple spans a facet
// plane if every point lies on one side. Returned as outward halfspaces
// n.x <= c. O(n^4); meant for n of a few dozen.
struct Halfspace {
  Point3 n;
  double c;
};

inline std::vector<Halfspace> hull_halfspaces(const std::vector<Point3>& pts) {
  std::vector<Halfspace> out;
  const std::size_t n = pts.size();
  double scale = 0.0;
  for (const auto& p : pts) scale = std::max({scale, std::abs(p.x), std::abs(p.y), std::abs(p.z)});
  const double eps = 1e-9 * std::max(scale, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      for (std::size_t k = j + 1; k < n; ++k) {
        Point3 nrm = dynahull::cross(pts[j] - pts[i], pts[k] - pts[i]);
        const double len = dynahull::norm(nrm);
        if (len < 1e-12) continue;
        nrm = nrm * (1.0 / len);
        const double c = dynahull::dot(nrm, pts[i]);
        bool above = false, below = false;
        for (std::size_t m = 0; m < n && !(above && below); ++m) {
          const double s = dynahull::dot(nrm, pts[m]) - c;
          if (s > eps) above = true;
          if (s < -eps) below = true;
        }
        if (above && below) continue;
        if (above) out.push_back({nrm * -1.0, -c});
        else out.push_back({nrm, c});
      }
    }
  }
  return out;
}

// Monte-Carlo volume by membership sampling in the bounding box.
inline double monte_carlo_volume(const std::vector<Point3>& pts, std::size_t samples,
                                 std::uint64_t seed) {
  const auto hs = hull_halfspaces(pts);
  Point3 lo = pts[0], hi = pts[0];
  for (const auto& p : pts) {
    lo = {std::min(lo.x, p.x), std::min(lo.y, p.y), std::min(lo.z, p.z)};
    hi = {std::max(hi.x, p.x), std::max(hi.y, p.y), std::max(hi.z, p.z)};
  }
  Rng rng(seed);
  std::size_t inside = 0;
  for (std::size_t s = 0; s < samples; ++s) {
    const Point3 q{rng.uniform(lo.x, hi.x), rng.uniform(lo.y, hi.y), rng.uniform(lo.z, hi.z)};
    bool in = true;
    for (const auto& h : hs) {
      if (dynahull::dot(h.n, q) > h.c) {
        in = false;
        break;
      }
    }
    inside += in ? 1 : 0;
  }
  return static_cast<double>(inside) / static_cast<double>(samples) * (hi.x - lo.x) *
         (hi.y - lo.y) * (hi.z - lo.z);
}

}  // namespace oracle

#endif  // DYNAHULL_TESTS_ORACLES_HPP_
