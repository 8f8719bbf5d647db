// Copyright 2026 The DynaHull Authors.
// SPDX-License-Identifier: Apache-2.0

#include "dynahull/scenegen.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <string>

#include "dynahull/error.hpp"

namespace dynahull {
namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorCode::kInvalidConfig, "scenario: " + what);
}

// Axis-aligned rectangle: origin + s*u + t*v, s,t in [0,1].
struct Patch {
  Point3 origin, u, v;
  double area() const { return norm(cross(u, v)); }
};

std::vector<Patch> static_surfaces(const ScenarioConfig& c) {
  const double L = c.room_length, W = c.room_width, H = c.room_height;
  std::vector<Patch> s = {
      {{0, 0, 0}, {L, 0, 0}, {0, W, 0}},  // floor
      {{0, 0, 0}, {0, W, 0}, {0, 0, H}},  // x = 0
      {{L, 0, 0}, {0, W, 0}, {0, 0, H}},  // x = L
      {{0, 0, 0}, {L, 0, 0}, {0, 0, H}},  // y = 0
      {{0, W, 0}, {L, 0, 0}, {0, 0, H}},  // y = W
  };
  for (const auto& b : c.static_boxes) {
    const Point3 e = b.max - b.min;
    s.push_back({{b.min.x, b.min.y, b.max.z}, {e.x, 0, 0}, {0, e.y, 0}});
    s.push_back({b.min, {0, e.y, 0}, {0, 0, e.z}});
    s.push_back({{b.max.x, b.min.y, b.min.z}, {0, e.y, 0}, {0, 0, e.z}});
    s.push_back({b.min, {e.x, 0, 0}, {0, 0, e.z}});
    s.push_back({{b.min.x, b.max.y, b.min.z}, {e.x, 0, 0}, {0, 0, e.z}});
  }
  return s;
}

class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng_);
  }

  Point3 noise(double sigma) {
    if (sigma <= 0.0) return {};
    std::normal_distribution<double> g(0.0, sigma);
    const double cap2 = 9.0 * sigma * sigma;
    for (;;) {
      const Point3 n{g(rng_), g(rng_), g(rng_)};
      if (dot(n, n) <= cap2) return n;
    }
  }

  Point3 unit_vector() {
    std::normal_distribution<double> g(0.0, 1.0);
    for (;;) {
      const Point3 d{g(rng_), g(rng_), g(rng_)};
      const double len = norm(d);
      if (len > 1e-12) return d * (1.0 / len);
    }
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

Point3 sample_capsule(Sampler& s, const Point3& base, double r, double h) {
  const double body = std::max(0.0, h - 2.0 * r);
  const double a_cyl = 2.0 * std::numbers::pi * r * body;
  const double a_caps = 4.0 * std::numbers::pi * r * r;
  if (s.uniform(0.0, a_cyl + a_caps) < a_cyl) {
    const double theta = s.uniform(0.0, 2.0 * std::numbers::pi);
    return {base.x + r * std::cos(theta), base.y + r * std::sin(theta),
            base.z + r + s.uniform(0.0, body)};
  }
  const Point3 d = s.unit_vector();
  const double cz = d.z >= 0.0 ? base.z + r + body : base.z + r;
  return {base.x + r * d.x, base.y + r * d.y, cz + r * d.z};
}

Point3 vec3(const nlohmann::json& j, const char* what) {
  require(j.is_array() && j.size() == 3, std::string(what) + " must be [x, y, z]");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

}  // namespace

void ScenarioConfig::validate() const {
  require(room_length > 0 && room_width > 0 && room_height > 0,
          "room dimensions must be > 0");
  require(n_frames >= 1, "n_frames must be >= 1");
  require(actor_radius > 0 && actor_height > 0, "actor shape must be > 0");
  require(actor_height >= 2.0 * actor_radius, "actor height must be >= 2 * radius");
  require(2.0 * actor_radius < std::min(room_length, room_width),
          "actors must fit in the room");
  require(actor_speed_min >= 0 && actor_speed_min <= actor_speed_max,
          "actor speed range must satisfy 0 <= min <= max");
  require(noise_sigma >= 0, "noise_sigma must be >= 0");
  for (const auto& b : static_boxes) {
    require(b.max.x > b.min.x && b.max.y > b.min.y && b.max.z > b.min.z,
            "box extents must be > 0");
  }
}

ScenarioConfig scenario_from_json(const nlohmann::json& j) {
  ScenarioConfig c;
  try {
    require(j.is_object(), "top level must be an object");
    if (j.contains("room")) {
      const auto& r = j.at("room");
      c.room_length = r.value("length", c.room_length);
      c.room_width = r.value("width", c.room_width);
      c.room_height = r.value("height", c.room_height);
    }
    c.n_frames = j.value("n_frames", c.n_frames);
    if (j.contains("static_boxes")) {
      for (const auto& b : j.at("static_boxes")) {
        c.static_boxes.push_back({vec3(b.at("min"), "box min"), vec3(b.at("max"), "box max")});
      }
    }
    c.n_actors = j.value("n_actors", c.n_actors);
    if (j.contains("actor_shape")) {
      c.actor_radius = j.at("actor_shape").value("radius", c.actor_radius);
      c.actor_height = j.at("actor_shape").value("height", c.actor_height);
    }
    if (j.contains("actor_speed")) {
      const auto& s = j.at("actor_speed");
      require(s.is_array() && s.size() == 2, "actor_speed must be [min, max]");
      c.actor_speed_min = s[0].get<double>();
      c.actor_speed_max = s[1].get<double>();
    }
    c.points_per_frame_static = j.value("points_per_frame_static", c.points_per_frame_static);
    c.points_per_actor_frame = j.value("points_per_actor_frame", c.points_per_actor_frame);
    c.noise_sigma = j.value("noise_sigma", c.noise_sigma);
    c.seed = j.value("seed", c.seed);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kInvalidConfig, std::string("scenario: ") + e.what());
  }
  c.validate();
  return c;
}

nlohmann::json to_json(const ScenarioConfig& c) {
  nlohmann::json boxes = nlohmann::json::array();
  for (const auto& b : c.static_boxes) {
    boxes.push_back({{"min", {b.min.x, b.min.y, b.min.z}},
                     {"max", {b.max.x, b.max.y, b.max.z}}});
  }
  return {{"room", {{"length", c.room_length}, {"width", c.room_width}, {"height", c.room_height}}},
          {"n_frames", c.n_frames},
          {"static_boxes", boxes},
          {"n_actors", c.n_actors},
          {"actor_shape", {{"radius", c.actor_radius}, {"height", c.actor_height}}},
          {"actor_speed", {c.actor_speed_min, c.actor_speed_max}},
          {"points_per_frame_static", c.points_per_frame_static},
          {"points_per_actor_frame", c.points_per_actor_frame},
          {"noise_sigma", c.noise_sigma},
          {"seed", c.seed}};
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kInvalidConfig, "cannot open scenario " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kInvalidConfig, "scenario " + path.string() + ": " + e.what());
  }
  return scenario_from_json(j);
}

LabeledScene generate_scene(const ScenarioConfig& c) {
  c.validate();
  Sampler s(c.seed);
  LabeledScene scene;
  scene.true_ground_plane = Plane{{0.0, 0.0, 1.0}, 0.0};

  // Random-waypoint trajectories, one position per frame.
  const double margin = c.actor_radius + 0.05;
  auto random_spot = [&] {
    return Point3{s.uniform(margin, c.room_length - margin),
                  s.uniform(margin, c.room_width - margin), 0.0};
  };
  scene.actor_trajectories.resize(c.n_actors);
  for (auto& traj : scene.actor_trajectories) {
    const double speed = s.uniform(c.actor_speed_min, c.actor_speed_max);
    Point3 pos = random_spot();
    Point3 goal = random_spot();
    for (std::size_t f = 0; f < c.n_frames; ++f) {
      traj.push_back(pos);
      double step = speed;
      while (step > 0.0) {
        const Point3 to_goal = goal - pos;
        const double d = norm(to_goal);
        if (d <= step) {
          pos = goal;
          step -= d;
          goal = random_spot();
          if (d == 0.0) break;
        } else {
          pos += to_goal * (step / d);
          step = 0.0;
        }
      }
    }
  }

  const auto surfaces = static_surfaces(c);
  std::vector<double> areas;
  for (const auto& p : surfaces) areas.push_back(p.area());
  std::discrete_distribution<std::size_t> pick_surface(areas.begin(), areas.end());

  const std::size_t total =
      c.n_frames * (c.points_per_frame_static + c.n_actors * c.points_per_actor_frame);
  std::vector<Point3> pts;
  std::vector<MotionLabel> labels;
  pts.reserve(total);
  labels.reserve(total);
  scene.sources.reserve(total);
  for (std::size_t f = 0; f < c.n_frames; ++f) {
    const auto frame = static_cast<std::uint32_t>(f);
    for (std::size_t i = 0; i < c.points_per_frame_static; ++i) {
      const Patch& p = surfaces[pick_surface(s.engine())];
      const double a = s.uniform(0.0, 1.0), b = s.uniform(0.0, 1.0);
      pts.push_back(p.origin + p.u * a + p.v * b + s.noise(c.noise_sigma));
      labels.push_back(MotionLabel::kStatic);
      scene.sources.push_back({-1, frame});
    }
    for (std::size_t a = 0; a < c.n_actors; ++a) {
      const Point3 base = scene.actor_trajectories[a][f];
      for (std::size_t i = 0; i < c.points_per_actor_frame; ++i) {
        pts.push_back(sample_capsule(s, base, c.actor_radius, c.actor_height) +
                      s.noise(c.noise_sigma));
        labels.push_back(MotionLabel::kDynamic);
        scene.sources.push_back({static_cast<std::int32_t>(a), frame});
      }
    }
  }
  scene.cloud = PointCloud(std::move(pts), std::move(labels));
  return scene;
}

PointCloud ground_truth_cloud(const LabeledScene& scene) {
  std::vector<std::size_t> keep;
  const auto& labels = *scene.cloud.labels();
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == MotionLabel::kStatic) keep.push_back(i);
  }
  return scene.cloud.subset(keep);
}

double capsule_surface_distance(const Point3& p, const Point3& base,
                                double radius, double height) {
  const double lo = base.z + radius;
  const double hi = base.z + std::max(radius, height - radius);
  const double z = std::clamp(p.z, lo, hi);
  return std::abs(distance(p, {base.x, base.y, z}) - radius);
}

nlohmann::json provenance_json(const ScenarioConfig& config,
                               const LabeledScene& scene) {
  nlohmann::json traj = nlohmann::json::array();
  for (const auto& t : scene.actor_trajectories) {
    nlohmann::json path = nlohmann::json::array();
    for (const auto& p : t) path.push_back({p.x, p.y, p.z});
    traj.push_back(path);
  }
  const auto& n = scene.true_ground_plane.normal;
  return {{"config", to_json(config)},
          {"ground_plane",
           {{"normal", {n.x, n.y, n.z}}, {"offset", scene.true_ground_plane.offset}}},
          {"actor_trajectories", traj},
          {"counts",
           {{"points", scene.cloud.size()},
            {"static", scene.cloud.count(MotionLabel::kStatic)},
            {"dynamic", scene.cloud.count(MotionLabel::kDynamic)}}}};
}

}  // namespace dynahull
