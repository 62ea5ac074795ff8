#pragma once

#include "dmcluster/metrics.hpp"
#include "dmcluster/range_image.hpp"
#include "dmcluster/types.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

namespace dmc {

/// Oriented box around its geometric center; yaw rotates about +z.
struct Box {
  Eigen::Vector3d center = Eigen::Vector3d::Zero();
  Eigen::Vector3d size = Eigen::Vector3d::Ones();
  double yaw = 0.0;
};

/// Vertical cylinder with a closed top.
struct Cylinder {
  Eigen::Vector3d base = Eigen::Vector3d::Zero();
  double radius = 0.3;
  double height = 1.7;
};

struct ScenePrimitive {
  std::variant<Box, Cylinder> shape;
  std::uint32_t semantic = 10;
  bool thing = true;
};

/// Spinning scanner at the origin. Beams sit at the pixel centers of the
/// matching ProjectionConfig, so every return owns one range-image pixel.
struct SensorModel {
  int rings = 64;
  int cols = 2048;
  double fov_up_deg = 3.0;
  double fov_down_deg = -25.0;
  double max_range = 80.0;
  double range_noise = 0.0;  ///< std-dev in meters, applied along the beam

  ProjectionConfig projection() const { return {rings, cols, fov_up_deg, fov_down_deg}; }
};

struct SceneSpec {
  std::vector<ScenePrimitive> objects;
  /// Height of a flat ground plane relative to the sensor, if any.
  std::optional<double> ground_z;
  std::uint32_t ground_semantic = 40;
  SensorModel sensor;
};

struct SyntheticFrame {
  PointCloud cloud;
  /// Ground truth: thing primitives get instances 1..k in list order.
  PanopticFrame truth;
};

/// Ray-casts the sensor against the scene. Deterministic for a given seed.
SyntheticFrame synth_scene(const SceneSpec& spec, std::uint64_t seed);

struct RandomSceneOptions {
  int cars = 6;
  /// Cars parked bumper to bumper along a curb beside the sensor.
  int parked_cars = 3;
  double parked_gap_min = 0.2;
  double parked_gap_max = 1.0;
  int pedestrians = 3;
  /// Groups of two or three pedestrians walking close together.
  int pedestrian_groups = 1;
  /// Pedestrians standing next to a parked car on the sensor side.
  int curbside_pedestrians = 1;
  int walls = 4;
  double min_distance = 5.0;
  double max_distance = 30.0;
  /// Minimum free space between object footprints.
  double clearance = 1.0;
  bool ground = true;
  SensorModel sensor;
};

/// Street-like scene: cars, pedestrians and building walls on a ground plane.
SceneSpec random_scene(std::uint64_t seed, const RandomSceneOptions& options = {});

}  // namespace dmc
