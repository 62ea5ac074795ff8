#include "dmcluster/synth_scene.hpp"

#include <Eigen/Geometry>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

namespace dmc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double hit(const Box& box, const Eigen::Vector3d& dir) {
  // Work in the box frame, where the slab test is axis aligned.
  const Eigen::Matrix3d to_box = Eigen::AngleAxisd(-box.yaw, Eigen::Vector3d::UnitZ()).toRotationMatrix();
  const Eigen::Vector3d o = to_box * (-box.center);
  const Eigen::Vector3d d = to_box * dir;
  const Eigen::Vector3d half = 0.5 * box.size;

  double t_near = -kInf, t_far = kInf;
  for (int k = 0; k < 3; ++k) {
    if (std::abs(d[k]) < 1e-12) {
      if (std::abs(o[k]) > half[k]) return kInf;
      continue;
    }
    double t0 = (-half[k] - o[k]) / d[k];
    double t1 = (half[k] - o[k]) / d[k];
    if (t0 > t1) std::swap(t0, t1);
    t_near = std::max(t_near, t0);
    t_far = std::min(t_far, t1);
  }
  if (t_near > t_far || t_far <= 0) return kInf;
  return t_near > 0 ? t_near : kInf;
}

double hit(const Cylinder& cyl, const Eigen::Vector3d& dir) {
  double best = kInf;
  const double top = cyl.base.z() + cyl.height;
  const Eigen::Vector2d o = -cyl.base.head<2>();
  const Eigen::Vector2d d = dir.head<2>();
  const double a = d.squaredNorm();
  if (a > 1e-12) {
    const double b = 2.0 * o.dot(d);
    const double c = o.squaredNorm() - cyl.radius * cyl.radius;
    const double disc = b * b - 4 * a * c;
    if (disc >= 0) {
      const double t = (-b - std::sqrt(disc)) / (2 * a);
      const double z = t * dir.z();
      if (t > 0 && z >= cyl.base.z() && z <= top) best = t;
    }
  }
  if (std::abs(dir.z()) > 1e-12) {
    const double t = top / dir.z();
    if (t > 0 && t < best && (t * d + o).squaredNorm() <= cyl.radius * cyl.radius) best = t;
  }
  return best;
}

void validate(const ScenePrimitive& p) {
  if (const auto* box = std::get_if<Box>(&p.shape)) {
    if (!(box->size.array() > 0).all() || !box->center.allFinite() || !std::isfinite(box->yaw)) {
      throw std::invalid_argument("degenerate box primitive");
    }
  } else {
    const auto& cyl = std::get<Cylinder>(p.shape);
    if (!(cyl.radius > 0) || !(cyl.height > 0) || !cyl.base.allFinite()) {
      throw std::invalid_argument("degenerate cylinder primitive");
    }
  }
}

}  // namespace

SyntheticFrame synth_scene(const SceneSpec& spec, std::uint64_t seed) {
  const SensorModel& s = spec.sensor;
  s.projection().validate();
  if (!(s.max_range > 0) || !(s.range_noise >= 0)) {
    throw std::invalid_argument("sensor needs positive max range and non-negative noise");
  }
  std::vector<std::uint32_t> instance_of(spec.objects.size(), 0);
  std::uint32_t next_instance = 0;
  for (std::size_t k = 0; k < spec.objects.size(); ++k) {
    validate(spec.objects[k]);
    if (spec.objects[k].thing) instance_of[k] = ++next_instance;
  }

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, s.range_noise);
  std::uniform_real_distribution<double> remission(0.0, 1.0);

  std::vector<Eigen::Vector4f> pts;
  SyntheticFrame frame;
  const double pi = std::numbers::pi;
  const double up = s.fov_up_deg * pi / 180.0;
  const double down = s.fov_down_deg * pi / 180.0;

  for (int r = 0; r < s.rings; ++r) {
    const double pitch = down + (up - down) * (1.0 - (r + 0.5) / s.rings);
    for (int c = 0; c < s.cols; ++c) {
      const double yaw = pi * (1.0 - 2.0 * (c + 0.5) / s.cols);
      const Eigen::Vector3d dir(std::cos(pitch) * std::cos(yaw), std::cos(pitch) * std::sin(yaw),
                                std::sin(pitch));

      double best = s.max_range;
      std::uint32_t sem = 0, inst = 0;
      bool found = false;
      for (std::size_t k = 0; k < spec.objects.size(); ++k) {
        const double t = std::visit([&](const auto& shape) { return hit(shape, dir); },
                                    spec.objects[k].shape);
        if (t < best) {
          best = t, sem = spec.objects[k].semantic, inst = instance_of[k], found = true;
        }
      }
      if (spec.ground_z && dir.z() < 0) {
        const double t = *spec.ground_z / dir.z();
        if (t > 0 && t < best) best = t, sem = spec.ground_semantic, inst = 0, found = true;
      }
      // Draw noise for every beam so the stream does not depend on hits.
      const double jitter = s.range_noise > 0 ? noise(rng) : 0.0;
      const double refl = remission(rng);
      if (!found) continue;

      const double range = std::max(best + jitter, 1e-3);
      const Eigen::Vector3d p = range * dir;
      pts.emplace_back(static_cast<float>(p.x()), static_cast<float>(p.y()),
                       static_cast<float>(p.z()), static_cast<float>(refl));
      frame.truth.semantics.push_back(sem);
      frame.truth.instances.push_back(inst);
    }
  }

  frame.cloud.resize(static_cast<Eigen::Index>(pts.size()), 4);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    frame.cloud.row(static_cast<Eigen::Index>(i)) = pts[i].transpose();
  }
  return frame;
}

SceneSpec random_scene(std::uint64_t seed, const RandomSceneOptions& options) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto uniform = [&](double lo, double hi) { return lo + (hi - lo) * unit(rng); };

  SceneSpec spec;
  spec.sensor = options.sensor;
  const double ground = -1.73;
  if (options.ground) spec.ground_z = ground;

  // Footprints as (center, radius) discs for rejection sampling.
  std::vector<std::pair<Eigen::Vector2d, double>> taken;
  auto place = [&](double radius, double min_d, double max_d, Eigen::Vector2d& at) {
    for (int attempt = 0; attempt < 200; ++attempt) {
      const double d = uniform(min_d, max_d);
      const double a = uniform(-std::numbers::pi, std::numbers::pi);
      at = {d * std::cos(a), d * std::sin(a)};
      bool free = true;
      for (const auto& [c, r] : taken) {
        if ((c - at).norm() < r + radius + options.clearance) {
          free = false;
          break;
        }
      }
      if (free) {
        taken.emplace_back(at, radius);
        return true;
      }
    }
    return false;
  };

  std::vector<Box> parked;
  if (options.parked_cars > 0) {
    const double side = unit(rng) < 0.5 ? -1.0 : 1.0;
    const double curb = side * uniform(3.0, 6.0);
    double x = uniform(-options.max_distance * 0.5, options.min_distance);
    for (int i = 0; i < options.parked_cars; ++i) {
      const Eigen::Vector3d size(uniform(3.8, 4.8), uniform(1.6, 1.9), uniform(1.4, 1.7));
      const Eigen::Vector2d c(x + 0.5 * size.x(), curb + side * 0.5 * size.y());
      Box box{Eigen::Vector3d(c.x(), c.y(), ground + 0.5 * size.z()), size, uniform(-0.05, 0.05)};
      spec.objects.push_back({box, 10, true});
      parked.push_back(box);
      taken.emplace_back(c, 0.5 * size.head<2>().norm());
      x += size.x() + uniform(options.parked_gap_min, options.parked_gap_max);
    }
  }

  Eigen::Vector2d at;
  for (int i = 0; i < options.cars; ++i) {
    const Eigen::Vector3d size(uniform(3.8, 4.8), uniform(1.6, 1.9), uniform(1.4, 1.7));
    if (!place(0.5 * size.head<2>().norm(), options.min_distance, options.max_distance, at)) continue;
    Box box{Eigen::Vector3d(at.x(), at.y(), ground + 0.5 * size.z()), size,
            uniform(-std::numbers::pi, std::numbers::pi)};
    spec.objects.push_back({box, 10, true});
  }
  for (int i = 0; i < options.pedestrians; ++i) {
    const double radius = uniform(0.25, 0.35);
    if (!place(radius, options.min_distance, options.max_distance, at)) continue;
    Cylinder cyl{Eigen::Vector3d(at.x(), at.y(), ground), radius, uniform(1.6, 1.9)};
    spec.objects.push_back({cyl, 30, true});
  }
  for (int i = 0; i < options.curbside_pedestrians && !parked.empty(); ++i) {
    const Box& car = parked[static_cast<std::size_t>(unit(rng) * static_cast<double>(parked.size())) %
                            parked.size()];
    // Between the sensor and the car, a hand's width from its flank.
    const double toward = car.center.y() > 0 ? -1.0 : 1.0;
    const double radius = uniform(0.25, 0.35);
    const Eigen::Vector2d c(car.center.x() + uniform(-0.35, 0.35) * car.size.x(),
                            car.center.y() + toward * (0.5 * car.size.y() + radius + uniform(0.05, 0.3)));
    spec.objects.push_back({Cylinder{Eigen::Vector3d(c.x(), c.y(), ground), radius, uniform(1.6, 1.9)}, 30, true});
    taken.emplace_back(c, radius);
  }
  for (int g = 0; g < options.pedestrian_groups; ++g) {
    const int members = unit(rng) < 0.5 ? 2 : 3;
    if (!place(0.5 * members, options.min_distance, options.max_distance, at)) continue;
    const double heading = uniform(-std::numbers::pi, std::numbers::pi);
    const Eigen::Vector2d step(std::cos(heading), std::sin(heading));
    double offset = 0;
    for (int k = 0; k < members; ++k) {
      const Eigen::Vector2d c = at + (offset - 0.4 * (members - 1)) * step;
      spec.objects.push_back(
          {Cylinder{Eigen::Vector3d(c.x(), c.y(), ground), 0.28, uniform(1.6, 1.9)}, 30, true});
      offset += uniform(0.7, 1.1);
    }
  }
  for (int i = 0; i < options.walls; ++i) {
    // Building facades beyond the object ring.
    const double d = uniform(options.max_distance + 5.0, options.max_distance + 15.0);
    const double a = uniform(-std::numbers::pi, std::numbers::pi);
    const Eigen::Vector3d size(uniform(8.0, 20.0), 0.5, uniform(4.0, 10.0));
    Box wall{Eigen::Vector3d(d * std::cos(a), d * std::sin(a), ground + 0.5 * size.z()), size,
             a + std::numbers::pi / 2};
    spec.objects.push_back({wall, 50, false});
  }
  return spec;
}

}  // namespace dmc
