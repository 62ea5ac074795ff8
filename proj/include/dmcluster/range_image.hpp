#pragma once

#include "dmcluster/types.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace dmc {

struct ProjectionConfig {
  int rows = 64;
  int cols = 2048;
  double fov_up_deg = 3.0;
  double fov_down_deg = -25.0;

  void validate() const;
};

/// Spherical range image of a single scan.
///
/// `range` holds the Euclidean norm of the point that won each pixel, or
/// kEmptyRange. `point_index` holds that point's row in the source cloud or
/// kNoPoint. `pixel_of_point` records, for every source point, the flat pixel it
/// projected to (including points that lost the nearest-wins race), or kNoPoint
/// for points that were dropped or masked out.
struct RangeImage {
  static constexpr float kEmptyRange = -1.0f;
  static constexpr std::int32_t kNoPoint = -1;

  Grid<float> range;
  Grid<std::int32_t> point_index;
  std::vector<std::int32_t> pixel_of_point;

  int rows() const { return static_cast<int>(range.rows()); }
  int cols() const { return static_cast<int>(range.cols()); }

  bool occupied(Pixel p) const { return point_index(p.row, p.col) != kNoPoint; }
  float at(Pixel p) const { return range(p.row, p.col); }
  Pixel pixel(std::int32_t flat) const { return {flat / cols(), flat % cols()}; }
  std::int32_t flat(Pixel p) const { return p.row * cols() + p.col; }
  std::size_t occupied_count() const;
};

/// Pixel a point maps to, or false if the point sits at the origin.
bool project_point(float x, float y, float z, const ProjectionConfig& cfg, Pixel& out);

/// Projects `points` onto a range image. Points at the origin are dropped, as
/// are points whose entry in `mask` is false (an empty mask keeps everything).
/// Pixel collisions keep the nearest point; equal ranges keep the lower index.
RangeImage project(const PointsRef& points, const ProjectionConfig& cfg,
                   std::span<const bool> mask = {});

/// Maps pixel labels back to the `n_points` source points. Points that lost
/// their pixel inherit its label only when `semantics` is given and the
/// winning point has the same class; otherwise they get 0.
std::vector<std::int32_t> unproject_labels(const RangeImage& img, const LabelImage& labels,
                                           std::size_t n_points,
                                           std::span<const std::uint32_t> semantics = {});

}  // namespace dmc
