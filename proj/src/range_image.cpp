#include "dmcluster/range_image.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace dmc {

void check_finite(const PointsRef& points) {
  if (!points.allFinite()) {
    throw std::invalid_argument("point cloud contains NaN or Inf values");
  }
}

void ProjectionConfig::validate() const {
  if (rows < 1 || cols < 1) {
    throw std::invalid_argument("projection needs rows and cols >= 1, got " +
                                std::to_string(rows) + "x" + std::to_string(cols));
  }
  if (!(fov_up_deg > fov_down_deg)) {
    throw std::invalid_argument("projection fov_up must exceed fov_down");
  }
}

std::size_t RangeImage::occupied_count() const {
  return static_cast<std::size_t>((point_index.array() != kNoPoint).count());
}

bool project_point(float x, float y, float z, const ProjectionConfig& cfg, Pixel& out) {
  const double dx = x, dy = y, dz = z;
  const double r = std::sqrt(dx * dx + dy * dy + dz * dz);
  if (r == 0.0) return false;

  const double fov_up = cfg.fov_up_deg * std::numbers::pi / 180.0;
  const double fov_down = cfg.fov_down_deg * std::numbers::pi / 180.0;
  const double pitch = std::asin(std::clamp(dz / r, -1.0, 1.0));
  const double yaw = std::atan2(dy, dx);

  const double u = 0.5 * (1.0 - yaw / std::numbers::pi) * cfg.cols;
  const double v = (1.0 - (pitch - fov_down) / (fov_up - fov_down)) * cfg.rows;
  out.col = std::clamp(static_cast<int>(std::floor(u)), 0, cfg.cols - 1);
  out.row = std::clamp(static_cast<int>(std::floor(v)), 0, cfg.rows - 1);
  return true;
}

RangeImage project(const PointsRef& points, const ProjectionConfig& cfg,
                   std::span<const bool> mask) {
  cfg.validate();
  const auto n = static_cast<std::size_t>(points.rows());
  if (!mask.empty() && mask.size() != n) {
    throw std::invalid_argument("projection mask length differs from point count");
  }

  RangeImage img;
  img.range = Grid<float>::Constant(cfg.rows, cfg.cols, RangeImage::kEmptyRange);
  img.point_index = Grid<std::int32_t>::Constant(cfg.rows, cfg.cols, RangeImage::kNoPoint);
  img.pixel_of_point.assign(n, RangeImage::kNoPoint);

  for (std::size_t i = 0; i < n; ++i) {
    if (!mask.empty() && !mask[i]) continue;
    const float x = points(i, 0), y = points(i, 1), z = points(i, 2);
    Pixel p;
    if (!project_point(x, y, z, cfg, p)) continue;

    const float r = std::sqrt(x * x + y * y + z * z);
    img.pixel_of_point[i] = img.flat(p);
    float& slot = img.range(p.row, p.col);
    // Visiting in index order, strict < keeps the lower index on ties.
    if (slot == RangeImage::kEmptyRange || r < slot) {
      slot = r;
      img.point_index(p.row, p.col) = static_cast<std::int32_t>(i);
    }
  }
  return img;
}

std::vector<std::int32_t> unproject_labels(const RangeImage& img, const LabelImage& labels,
                                           std::size_t n_points,
                                           std::span<const std::uint32_t> semantics) {
  if (labels.rows() != img.range.rows() || labels.cols() != img.range.cols()) {
    throw std::invalid_argument("label image dimensions differ from range image");
  }
  if (n_points != img.pixel_of_point.size()) {
    throw std::invalid_argument("point count differs from the projected cloud");
  }
  if (!semantics.empty() && semantics.size() != n_points) {
    throw std::invalid_argument("semantics length differs from point count");
  }

  std::vector<std::int32_t> out(n_points, 0);
  for (std::size_t i = 0; i < n_points; ++i) {
    const std::int32_t flat = img.pixel_of_point[i];
    if (flat == RangeImage::kNoPoint) continue;
    const Pixel p = img.pixel(flat);
    const std::int32_t winner = img.point_index(p.row, p.col);
    const std::int32_t label = labels(p.row, p.col);
    if (winner == static_cast<std::int32_t>(i)) {
      out[i] = label;
    } else if (!semantics.empty() && semantics[i] == semantics[static_cast<std::size_t>(winner)]) {
      out[i] = label;
    }
  }
  return out;
}

}  // namespace dmc
