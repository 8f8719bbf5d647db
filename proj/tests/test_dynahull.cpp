// Copyright 2026 The DynaHull Authors.
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "dynahull/convex_hull.hpp"
#include "dynahull/dynahull.hpp"
#include "dynahull/error.hpp"
#include "oracles.hpp"

using namespace dynahull;

namespace {

// The iterative threshold written as the plain loop it describes.
std::vector<std::size_t> iterative_oracle(const std::vector<double>& d, double pct,
                                          double frac, double* tau_out) {
  const std::size_t n = d.size();
  const auto needed = static_cast<std::size_t>(std::ceil(pct * double(n) / 100.0 - 1e-9));
  double mean = 0.0, var = 0.0;
  for (double v : d) mean += v / double(n);
  for (double v : d) var += (v - mean) * (v - mean) / double(n);
  double step = frac * std::sqrt(var);
  if (!(step > 0.0)) step = frac * std::abs(*std::max_element(d.begin(), d.end()));
  for (long j = 0;; ++j) {
    const double tau = double(j) * step;
    std::vector<std::size_t> removed;
    for (std::size_t i = 0; i < n; ++i) {
      if (d[i] < tau) removed.push_back(i);
    }
    if (removed.size() >= needed) {
      *tau_out = tau;
      return removed;
    }
  }
}

std::vector<double> random_densities(oracle::Rng& rng, std::size_t n) {
  std::vector<double> d(n);
  for (auto& v : d) v = std::exp(rng.normal() * 1.5 + 5.0);
  return d;
}

DynaHullParams no_ground_params() {
  DynaHullParams p;
  p.ground.enabled = false;
  return p;
}

}  // namespace

TEST_CASE("rescale_removal") {
  CHECK(rescale_removal(std::vector<std::size_t>{100, 500}, 5, 20) == std::vector<double>{5, 20});
  CHECK(rescale_removal(std::vector<std::size_t>{100, 300, 500}, 5, 20) ==
        std::vector<double>{5, 12.5, 20});
  CHECK(rescale_removal(std::vector<std::size_t>{200, 200, 200}, 5, 20) ==
        std::vector<double>{5, 5, 5});
  CHECK(rescale_removal(std::vector<std::size_t>{}, 5, 20).empty());

  oracle::Rng rng(1);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::size_t> counts(1 + rng.below(20));
    for (auto& c : counts) c = rng.below(10000);
    const auto r = rescale_removal(counts, 5, 20);
    for (std::size_t i = 0; i < counts.size(); ++i) {
      CHECK(r[i] >= 5.0);
      CHECK(r[i] <= 20.0);
      for (std::size_t j = 0; j < counts.size(); ++j) {
        if (counts[i] > counts[j]) CHECK(r[i] >= r[j]);
      }
    }
  }
}

TEST_CASE("quantile threshold") {
  std::vector<double> d(100);
  std::iota(d.begin(), d.end(), 1.0);
  std::reverse(d.begin(), d.end());  // position no longer equals rank

  const auto none = threshold_removal(d, 0.0, ThresholdMode::kQuantile, 0.01);
  CHECK(none.removed.empty());
  CHECK(none.threshold == 0.0);

  const auto r = threshold_removal(d, 20.0, ThresholdMode::kQuantile, 0.01);
  REQUIRE(r.removed.size() == 20);
  for (auto i : r.removed) CHECK(d[i] <= 20.0);
  CHECK(r.threshold == 21.0);

  const auto all = threshold_removal(d, 100.0, ThresholdMode::kQuantile, 0.01);
  CHECK(all.removed.size() == 100);
  CHECK(all.threshold > 100.0);
}

TEST_CASE("quantile ties fall back to position") {
  const std::vector<double> d{5, 1, 5, 1, 5, 1, 5, 5, 5, 5};
  const auto r = threshold_removal(d, 50.0, ThresholdMode::kQuantile, 0.01);
  CHECK(r.removed == std::vector<std::size_t>{0, 1, 2, 3, 5});
}

TEST_CASE("quantile matches a sort oracle") {
  oracle::Rng rng(2);
  for (int trial = 0; trial < 100; ++trial) {
    const auto d = random_densities(rng, 1 + rng.below(500));
    const double pct = rng.uniform(0, 30);
    const auto r = threshold_removal(d, pct, ThresholdMode::kQuantile, 0.01);
    std::vector<std::pair<double, std::size_t>> sorted;
    for (std::size_t i = 0; i < d.size(); ++i) sorted.push_back({d[i], i});
    std::sort(sorted.begin(), sorted.end());
    const auto m = static_cast<std::size_t>(std::floor(pct * double(d.size()) / 100.0));
    std::vector<std::size_t> want;
    for (std::size_t i = 0; i < m; ++i) want.push_back(sorted[i].second);
    std::sort(want.begin(), want.end());
    CHECK(r.removed == want);
  }
}

TEST_CASE("iterative threshold matches the literal loop") {
  oracle::Rng rng(3);
  for (int trial = 0; trial < 60; ++trial) {
    const auto d = random_densities(rng, 20 + rng.below(300));
    const double pct = rng.uniform(1, 25);
    const double frac = trial % 2 ? 0.01 : 0.05;
    double tau = 0.0;
    const auto want = iterative_oracle(d, pct, frac, &tau);
    const auto r = threshold_removal(d, pct, ThresholdMode::kIterative, frac);
    CHECK(r.removed == want);
    CHECK(r.threshold == doctest::Approx(tau).epsilon(1e-12));
  }
}

TEST_CASE("iterative with constant densities") {
  const std::vector<double> d(40, 7.0);
  const auto r = threshold_removal(d, 10.0, ThresholdMode::kIterative, 0.01);
  CHECK(r.removed.size() == 40);  // one step clears the plateau
  CHECK(r.threshold > 7.0);
}

TEST_CASE("iterative and quantile differ by at most one step") {
  oracle::Rng rng(4);
  for (int trial = 0; trial < 50; ++trial) {
    const auto d = random_densities(rng, 200 + rng.below(500));
    const double pct = rng.uniform(5, 20);
    const auto q = threshold_removal(d, pct, ThresholdMode::kQuantile, 0.01);
    const auto it = threshold_removal(d, pct, ThresholdMode::kIterative, 0.01);
    double mean = 0, var = 0;
    for (double v : d) mean += v / double(d.size());
    for (double v : d) var += (v - mean) * (v - mean) / double(d.size());
    const double step = 0.01 * std::sqrt(var);
    const auto in_last_step = std::count_if(d.begin(), d.end(), [&](double v) {
      return v >= it.threshold - step && v < it.threshold;
    });
    CHECK(it.removed.size() >= q.removed.size());
    CHECK(it.removed.size() - q.removed.size() <= static_cast<std::size_t>(in_last_step) + 1);
  }
}

TEST_CASE("density of a filled cube neighbourhood") {
  oracle::Rng rng(5);
  std::vector<Point3> pts;
  for (int i = 0; i < 8; ++i) pts.push_back({double(i & 1), double((i >> 1) & 1), double(i >> 2)});
  while (pts.size() < 75) pts.push_back({rng.uniform(), rng.uniform(), rng.uniform()});
  const auto f = density_field(pts, 75, 1e-12, 1);
  const double mc = oracle::monte_carlo_volume(
      {pts.begin(), pts.begin() + 8}, 200'000, 9);  // the corners span the hull
  for (double d : f.densities) CHECK(d == doctest::Approx(75.0 / mc).epsilon(0.02));
}

TEST_CASE("planar neighbourhood hits the volume floor") {
  oracle::Rng rng(6);
  std::vector<Point3> pts;
  for (int i = 0; i < 75; ++i) pts.push_back({rng.uniform(), rng.uniform(), 2.0});
  const auto f = density_field(pts, 75, 1e-6, 1);
  for (double d : f.densities) CHECK(d == 75.0 / 1e-6);
}

TEST_CASE("density field matches brute-force neighbourhoods") {
  oracle::Rng rng(7);
  const auto pts = oracle::random_box(rng, 600, 0, 3);
  for (std::size_t k : {4, 20, 75}) {
    const auto f = density_field(pts, k, 1e-12, 1);
    for (std::size_t i = 0; i < pts.size(); i += 13) {
      std::vector<Point3> hood;
      for (const auto& [dist, j] : oracle::knn(pts, pts[i], k)) hood.push_back(pts[j]);
      CHECK(f.densities[i] == double(k) / std::max(hull_volume(hood), 1e-12));
    }
  }
  CHECK_THROWS_AS(density_field(std::span(pts).first(10), 11, 1e-12, 1), Error);
}

TEST_CASE("per-cluster density equals density within each cluster") {
  oracle::Rng rng(8);
  const auto pts = oracle::random_box(rng, 400);
  std::vector<std::uint32_t> labels(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) labels[i] = pts[i].x < 0 ? 0 : 1;
  const auto f = density_field_per_cluster(pts, labels, 2, 10, 1e-12, 2);
  for (std::uint32_t c = 0; c < 2; ++c) {
    std::vector<Point3> sub;
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (labels[i] == c) {
        sub.push_back(pts[i]);
        idx.push_back(i);
      }
    }
    const auto g = density_field(sub, 10, 1e-12, 1);
    for (std::size_t j = 0; j < idx.size(); ++j) CHECK(f.densities[idx[j]] == g.densities[j]);
  }
}

TEST_CASE("parameter validation") {
  DynaHullParams p;
  p.k_neighbors = 3;
  CHECK_THROWS_AS(p.validate(), Error);
  p = {};
  p.min_remove = 30;
  CHECK_THROWS_AS(p.validate(), Error);
  p = {};
  p.n_clusters = 0;
  CHECK_THROWS_AS(p.validate(), Error);
  p = {};
  CHECK_NOTHROW(p.validate());
  CHECK(parse_threshold_mode("iterative") == ThresholdMode::kIterative);
  CHECK_THROWS_AS(parse_threshold_mode("bogus"), Error);
}

TEST_CASE("too few points") {
  oracle::Rng rng(9);
  const PointCloud c(oracle::random_box(rng, 50));
  try {
    filter_map(c, no_ground_params());
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kTooFewPoints);
  }
}

TEST_CASE("fully static uniform cloud loses exactly its scheduled share") {
  oracle::Rng rng(10);
  const PointCloud c(oracle::random_box(rng, 3000, 0, 4));
  const auto r = filter_map(c, no_ground_params());
  std::size_t expected = 0;
  for (const auto& cr : r.plan) {
    const auto m = static_cast<std::size_t>(std::floor(cr.removal_pct * double(cr.count) / 100.0 + 1e-9));
    CHECK(cr.removed == m);
    expected += m;
  }
  CHECK(r.removed_indices.size() == expected);
}

TEST_CASE("property: conservation, order and monotone plan") {
  oracle::Rng rng(11);
  for (int trial = 0; trial < 6; ++trial) {
    std::vector<Point3> pts = oracle::random_box(rng, 1500, 0, 5);
    for (auto& p : pts) p.z *= 0.6;
    // Floor so the ground stage has something to find.
    for (int i = 0; i < 800; ++i) pts.push_back({rng.uniform(0, 5), rng.uniform(0, 5), -1.0});
    const PointCloud c(pts);
    DynaHullParams p;
    p.seed = rng.next();
    p.k_neighbors = 20 + rng.below(40);
    p.n_clusters = 1 + rng.below(6);
    const auto r = filter_map(c, p);
    REQUIRE(r.ground_found);

    CHECK(r.filtered.size() + r.removed_indices.size() == c.size());
    const std::set<std::size_t> removed(r.removed_indices.begin(), r.removed_indices.end());
    CHECK(removed.size() == r.removed_indices.size());
    const std::set<std::size_t> ground(r.ground.ground_indices.begin(), r.ground.ground_indices.end());
    for (auto i : removed) CHECK(ground.count(i) == 0);
    std::multiset<Point3> kept(r.filtered.points().begin(), r.filtered.points().end());
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (removed.count(i)) {
        continue;
      }
      auto it = kept.find(c[i]);
      REQUIRE(it != kept.end());
      kept.erase(it);
    }
    CHECK(kept.empty());

    // Density-monotone removal within each cluster.
    const auto& ng = r.ground.nonground_indices;
    std::vector<double> max_removed(p.n_clusters, -1.0), min_kept(p.n_clusters, 1e300);
    for (std::size_t j = 0; j < ng.size(); ++j) {
      const auto cl = r.cluster_labels[j];
      if (removed.count(ng[j])) max_removed[cl] = std::max(max_removed[cl], r.densities[j]);
      else min_kept[cl] = std::min(min_kept[cl], r.densities[j]);
    }
    for (std::size_t cl = 0; cl < p.n_clusters; ++cl) CHECK(max_removed[cl] <= min_kept[cl]);

    for (const auto& a : r.plan) {
      for (const auto& b : r.plan) {
        if (a.count > b.count) CHECK(a.removal_pct >= b.removal_pct);
      }
    }
  }
}

TEST_CASE("property: scaling by two scales densities by 1/8 and keeps the removed set") {
  oracle::Rng rng(12);
  for (int trial = 0; trial < 4; ++trial) {
    const auto pts = oracle::random_box(rng, 1200, -3, 3);
    std::vector<Point3> scaled;
    for (const auto& p : pts) scaled.push_back(p * 2.0);
    auto params = no_ground_params();
    params.seed = trial;
    params.kmeans_tol = 0.0;
    const auto a = filter_map(PointCloud(pts), params);
    const auto b = filter_map(PointCloud(scaled), params);
    CHECK(a.removed_indices == b.removed_indices);
    REQUIRE(a.densities.size() == b.densities.size());
    for (std::size_t i = 0; i < a.densities.size(); ++i) CHECK(b.densities[i] == a.densities[i] / 8.0);
  }
}

TEST_CASE("property: results do not depend on the thread count") {
  oracle::Rng rng(13);
  const PointCloud c(oracle::random_box(rng, 2500, 0, 6));
  for (bool per_cluster : {false, true}) {
    auto p = no_ground_params();
    p.per_cluster_knn = per_cluster;
    p.threads = 1;
    const auto base = filter_map(c, p);
    for (std::size_t t : {2, 3, 8}) {
      p.threads = t;
      const auto r = filter_map(c, p);
      CHECK(r.removed_indices == base.removed_indices);
      CHECK(r.densities == base.densities);
      CHECK(r.filtered == base.filtered);
    }
  }
}

TEST_CASE("missing ground is a warning, not an error") {
  oracle::Rng rng(14);
  std::vector<Point3> pts;
  // A single vertical wall: no horizontal plane anywhere.
  for (int i = 0; i < 500; ++i) pts.push_back({0.01 * rng.normal(), rng.uniform(0, 5), rng.uniform(0, 3)});
  const auto r = filter_map(PointCloud(pts), DynaHullParams{});
  CHECK_FALSE(r.ground_found);
  CHECK(r.warnings.size() == 1);
  CHECK(r.ground.nonground_indices.size() == pts.size());
}
