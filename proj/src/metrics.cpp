// Copyright 2026 The DynaHull Authors.
// SPDX-License-Identifier: Apache-2.0

#include "dynahull/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>

#include "dynahull/assignment.hpp"
#include "dynahull/cloud_io.hpp"
#include "dynahull/error.hpp"
#include "dynahull/kdtree.hpp"
#include "dynahull/parallel.hpp"

namespace dynahull {
namespace {

void require_non_empty(const PointCloud& c, const char* which) {
  if (c.empty()) {
    throw Error(ErrorCode::kEmptyCloud, std::string(which) + " cloud is empty");
  }
}

// Squared distance from every `from` point to its nearest `to` point.
std::vector<double> nn_squared(const PointCloud& from, const PointCloud& to,
                               std::size_t threads) {
  const KdTree3 tree(to.points());
  std::vector<double> d2(from.size());
  parallel_for(from.size(), threads, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) d2[i] = tree.nearest(from[i]).second;
  });
  return d2;
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

}  // namespace

double percentile(std::vector<double> values, double pct) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const double pos = pct / 100.0 * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + (values[hi] - values[lo]) * frac;
}

DistanceStats nn_distance_stats(const PointCloud& pred, const PointCloud& truth,
                                std::size_t threads) {
  require_non_empty(pred, "prediction");
  require_non_empty(truth, "truth");
  const auto d2 = nn_squared(pred, truth, threads);
  std::vector<double> d(d2.size());
  for (std::size_t i = 0; i < d2.size(); ++i) d[i] = std::sqrt(d2[i]);

  DistanceStats s;
  s.mean = mean_of(d);
  s.mae = s.mean;
  double var = 0.0;
  for (double x : d) var += (x - s.mean) * (x - s.mean);
  s.variance = var / static_cast<double>(d.size());
  s.rmse = std::sqrt(mean_of(d2));
  s.p90 = percentile(std::move(d), 90.0);
  return s;
}

double chamfer(const PointCloud& a, const PointCloud& b, std::size_t threads) {
  require_non_empty(a, "first");
  require_non_empty(b, "second");
  return mean_of(nn_squared(a, b, threads)) + mean_of(nn_squared(b, a, threads));
}

double emd(const PointCloud& a, const PointCloud& b, std::size_t n_samples,
           std::uint64_t seed) {
  require_non_empty(a, "first");
  require_non_empty(b, "second");
  if (n_samples == 0) throw Error(ErrorCode::kInvalidArgument, "n_samples must be >= 1");
  const std::size_t n = std::min({n_samples, a.size(), b.size()});
  const PointCloud sa = downsample_uniform(a, n, seed);
  const PointCloud sb = downsample_uniform(b, n, seed);
  std::vector<double> cost(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) cost[i * n + j] = distance(sa[i], sb[j]);
  }
  return solve_assignment(cost, n).cost / static_cast<double>(n);
}

ConfusionReport confusion(std::span<const MotionLabel> labels,
                          std::span<const std::size_t> removed) {
  std::vector<char> is_removed(labels.size(), 0);
  for (auto i : removed) {
    if (i >= labels.size()) {
      throw Error(ErrorCode::kIndexOutOfRange,
                  "removed index " + std::to_string(i) + " exceeds " +
                      std::to_string(labels.size()) + " labels");
    }
    is_removed[i] = 1;
  }
  ConfusionReport r;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const bool dyn = labels[i] == MotionLabel::kDynamic;
    if (is_removed[i]) {
      ++(dyn ? r.tp : r.fp);
    } else {
      ++(dyn ? r.fn : r.tn);
    }
  }
  auto ratio = [](std::size_t num, std::size_t den) {
    return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
  };
  r.precision = ratio(r.tp, r.tp + r.fp);
  r.recall = ratio(r.tp, r.tp + r.fn);
  r.fp_pct = 100.0 * ratio(r.fp, r.fp + r.tn);
  r.fn_pct = 100.0 * ratio(r.fn, r.fn + r.tp);
  return r;
}

double round_significant(double v, int digits) {
  if (v == 0.0 || !std::isfinite(v)) return v;
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.*g", digits, v);
  return std::strtod(buf, nullptr);
}

nlohmann::json to_json(const ConfusionReport& c) {
  return {{"tp", c.tp},
          {"fp", c.fp},
          {"fn", c.fn},
          {"tn", c.tn},
          {"fp_pct", round_significant(c.fp_pct)},
          {"fn_pct", round_significant(c.fn_pct)},
          {"precision", round_significant(c.precision)},
          {"recall", round_significant(c.recall)}};
}

nlohmann::json to_json(const MetricsReport& r) {
  nlohmann::json j;
  j["mae"] = round_significant(r.distance.mae);
  j["variance"] = round_significant(r.distance.variance);
  j["rmse"] = round_significant(r.distance.rmse);
  j["p90"] = round_significant(r.distance.p90);
  j["chamfer"] = round_significant(r.chamfer);
  j["emd"] = round_significant(r.emd);
  j["confusion"] = r.confusion ? to_json(*r.confusion) : nlohmann::json(nullptr);
  j["runtime_s"] = round_significant(r.runtime_s);
  return j;
}

}  // namespace dynahull
