// Copyright 2026 The DynaHull Authors.
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <thread>

#include "dynahull/kdtree.hpp"
#include "oracles.hpp"

using namespace dynahull;

namespace {

void check_against_oracle(const std::vector<Point3>& pts, const KdTree3& tree,
                          const Point3& q, std::size_t k) {
  const auto got = tree.knn(q, k);
  const auto want = oracle::knn(pts, q, k);
  REQUIRE(got.size() == want.size());
  for (std::size_t i = 0; i < want.size(); ++i) {
    CHECK(got.indices[i] == want[i].second);
    CHECK(got.distances[i] == want[i].first);
  }
}

}  // namespace

TEST_CASE("empty and single point trees") {
  const KdTree3 empty(std::vector<Point3>{});
  CHECK(empty.empty());
  CHECK(empty.knn({1, 2, 3}, 5).size() == 0);

  const std::vector<Point3> one{{1, 1, 1}};
  const KdTree3 tree(one);
  const auto r = tree.knn({1, 1, 3}, 4);
  REQUIRE(r.size() == 1);
  CHECK(r.indices[0] == 0);
  CHECK(r.distances[0] == 2.0);
}

TEST_CASE("self match comes first at distance zero") {
  oracle::Rng rng(1);
  const auto pts = oracle::random_box(rng, 500);
  const KdTree3 tree(pts);
  for (std::size_t i = 0; i < pts.size(); i += 37) {
    const auto r = tree.knn(pts[i], 3);
    CHECK(r.indices[0] == i);
    CHECK(r.distances[0] == 0.0);
    const auto [idx, d2] = tree.nearest(pts[i]);
    CHECK(idx == i);
    CHECK(d2 == 0.0);
  }
}

TEST_CASE("k larger than the tree returns everything") {
  oracle::Rng rng(2);
  const auto pts = oracle::random_box(rng, 30);
  const KdTree3 tree(pts);
  CHECK(tree.knn({0, 0, 0}, 100).size() == 30);
  check_against_oracle(pts, tree, {0.3, -0.2, 0.9}, 100);
}

TEST_CASE("random clouds match the brute force oracle exactly") {
  oracle::Rng rng(3);
  for (std::size_t n : {13, 250, 5000}) {
    const auto pts = oracle::random_box(rng, n, -3.0, 7.0);
    const KdTree3 tree(pts);
    for (int q = 0; q < 40; ++q) {
      const Point3 query{rng.uniform(-4, 8), rng.uniform(-4, 8), rng.uniform(-4, 8)};
      check_against_oracle(pts, tree, query, 1 + rng.below(100));
    }
  }
}

TEST_CASE("ties are broken by index") {
  // Lattice points and duplicates produce many equal distances.
  std::vector<Point3> pts;
  for (int x = -3; x <= 3; ++x)
    for (int y = -3; y <= 3; ++y)
      for (int z = -3; z <= 3; ++z) pts.push_back({double(x), double(y), double(z)});
  const auto copy = pts;
  pts.insert(pts.end(), copy.begin(), copy.end());
  const KdTree3 tree(pts);
  for (std::size_t k : {1, 7, 27, 50, 99}) {
    check_against_oracle(pts, tree, {0, 0, 0}, k);
    check_against_oracle(pts, tree, {0.5, 0.5, 0.5}, k);
    check_against_oracle(pts, tree, {3, -3, 0}, k);
  }
}

TEST_CASE("reported distance equals the recomputed euclidean distance") {
  oracle::Rng rng(4);
  const auto pts = oracle::random_box(rng, 2000, -100, 100);
  const KdTree3 tree(pts);
  const Point3 q{1.25, -7.5, 33.0};
  const auto r = tree.knn(q, 50);
  for (std::size_t i = 0; i < r.size(); ++i) {
    const double d = std::sqrt(oracle::sq(pts[r.indices[i]], q));
    CHECK(std::abs(r.distances[i] - d) <= 1e-12 * d);
  }
}

TEST_CASE("concurrent queries agree with serial ones") {
  oracle::Rng rng(5);
  const auto pts = oracle::random_box(rng, 3000);
  const auto queries = oracle::random_box(rng, 200);
  const KdTree3 tree(pts);
  std::vector<KnnResult> serial;
  for (const auto& q : queries) serial.push_back(tree.knn(q, 20));

  std::vector<KnnResult> parallel(queries.size());
  std::vector<std::thread> workers;
  for (int t = 0; t < 4; ++t) {
    workers.emplace_back([&, t] {
      for (std::size_t i = t; i < queries.size(); i += 4) parallel[i] = tree.knn(queries[i], 20);
    });
  }
  for (auto& w : workers) w.join();
  for (std::size_t i = 0; i < queries.size(); ++i) {
    CHECK(parallel[i].indices == serial[i].indices);
    CHECK(parallel[i].distances == serial[i].distances);
  }
}
