// Copyright 2026 The DynaHull Authors.
// SPDX-License-Identifier: Apache-2.0
//
// Deterministic labeled room scenes: static surfaces re-sampled every
// simulated scan (so they accumulate density) and capsule-shaped actors on
// random-waypoint paths (so their samples smear out).

#ifndef DYNAHULL_SCENEGEN_HPP_
#define DYNAHULL_SCENEGEN_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <vector>

#include <json.hpp>

#include "dynahull/ground_segmentation.hpp"
#include "dynahull/point_cloud.hpp"

namespace dynahull {

struct Box {
  Point3 min;
  Point3 max;
};

struct ScenarioConfig {
  double room_length = 8.0;  // x extent, meters
  double room_width = 6.0;   // y extent
  double room_height = 3.0;  // z extent
  std::size_t n_frames = 50;
  std::vector<Box> static_boxes;
  std::size_t n_actors = 5;
  double actor_radius = 0.25;
  double actor_height = 1.7;
  double actor_speed_min = 0.05;  // meters per frame
  double actor_speed_max = 0.15;
  std::size_t points_per_frame_static = 2000;
  std::size_t points_per_actor_frame = 60;
  double noise_sigma = 0.01;  // meters
  std::uint64_t seed = 42;

  // Throws Error(kInvalidConfig).
  void validate() const;
};

// JSON uses the field layout {"room": {"length", "width", "height"},
// "n_frames", "static_boxes": [{"min": [x,y,z], "max": [x,y,z]}],
// "n_actors", "actor_shape": {"radius", "height"}, "actor_speed": [lo, hi],
// "points_per_frame_static", "points_per_actor_frame", "noise_sigma",
// "seed"}. Missing keys keep their defaults.
ScenarioConfig scenario_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ScenarioConfig& config);
ScenarioConfig load_scenario(const std::filesystem::path& path);

struct PointSource {
  std::int32_t actor = -1;  // -1 for static surfaces
  std::uint32_t frame = 0;
};

struct LabeledScene {
  PointCloud cloud;  // labels always present
  Plane true_ground_plane;
  // actor_trajectories[a][f] is the capsule base center of actor a in frame f.
  std::vector<std::vector<Point3>> actor_trajectories;
  std::vector<PointSource> sources;  // per point provenance
};

// Every point carries isotropic Gaussian noise of scale noise_sigma,
// truncated at a radius of 3 sigma.
LabeledScene generate_scene(const ScenarioConfig& config);

// The Static-labeled subset, in scene order.
PointCloud ground_truth_cloud(const LabeledScene& scene);

// Distance from p to the surface of the vertical capsule standing at `base`.
double capsule_surface_distance(const Point3& p, const Point3& base,
                                double radius, double height);

// Sidecar written next to a generated PCD: config, plane, trajectories,
// label counts.
nlohmann::json provenance_json(const ScenarioConfig& config,
                               const LabeledScene& scene);

}  // namespace dynahull

#endif  // DYNAHULL_SCENEGEN_HPP_
