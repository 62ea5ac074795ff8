#include "dmcluster/connectivity.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>

namespace dmc {

void Neighborhood::push(Pixel p) {
  for (std::size_t i = 0; i < size_; ++i) {
    if (items_[i] == p) return;
  }
  items_[size_++] = p;
}

Neighborhood neighborhood(Pixel p, int rows, int cols, bool wrap) {
  Neighborhood out;
  auto add = [&](Pixel q) {
    if (q != p) out.push(q);
  };
  if (p.row > 0) add({p.row - 1, p.col});
  if (p.row + 1 < rows) add({p.row + 1, p.col});
  if (p.col > 0) {
    add({p.row, p.col - 1});
  } else if (wrap) {
    add({p.row, cols - 1});
  }
  if (p.col + 1 < cols) {
    add({p.row, p.col + 1});
  } else if (wrap) {
    add({p.row, 0});
  }
  return out;
}

void ConditionParams::validate() const {
  constexpr double kHalfPi = std::numbers::pi / 2.0;
  if (!(theta_deg > 0.0 && theta_deg < 90.0)) {
    throw std::invalid_argument("theta must lie in (0, 90) degrees");
  }
  if (!(horizontal_step > 0.0 && horizontal_step < kHalfPi)) {
    throw std::invalid_argument("horizontal step must lie in (0, pi/2)");
  }
  for (double s : vertical_steps) {
    if (!(s > 0.0 && s < kHalfPi)) {
      throw std::invalid_argument("vertical steps must lie in (0, pi/2)");
    }
  }
}

ConditionParams condition_params(const ProjectionConfig& proj, double theta_deg) {
  proj.validate();
  ConditionParams params;
  params.theta_deg = theta_deg;
  params.cols = proj.cols;
  params.horizontal_step = 2.0 * std::numbers::pi / proj.cols;
  const double fov = (proj.fov_up_deg - proj.fov_down_deg) * std::numbers::pi / 180.0;
  params.vertical_steps.assign(static_cast<std::size_t>(std::max(proj.rows - 1, 0)),
                               fov / proj.rows);
  params.validate();
  return params;
}

double pair_alpha(const PixelPair& pair, const ConditionParams& params) {
  const Pixel& a = pair.a;
  const Pixel& b = pair.b;
  if (a.row == b.row) {
    const int dc = std::abs(a.col - b.col);
    const bool wrapped = params.cols > 2 && dc == params.cols - 1;
    if (dc == 1 || wrapped) return params.horizontal_step;
  } else if (a.col == b.col && std::abs(a.row - b.row) == 1) {
    const auto upper = static_cast<std::size_t>(std::min(a.row, b.row));
    if (upper >= params.vertical_steps.size()) {
      throw std::out_of_range("no vertical step for row " + std::to_string(upper));
    }
    return params.vertical_steps[upper];
  }
  throw std::invalid_argument("pixel pair is not 4-adjacent");
}

AngleCondition::AngleCondition(const RangeImage& img, ConditionParams params)
    : img_(&img), params_(std::move(params)),
      theta_rad_(params_.theta_deg * std::numbers::pi / 180.0) {
  params_.validate();
  if (params_.cols == 0) params_.cols = img.cols();
  if (params_.vertical_steps.size() + 1 < static_cast<std::size_t>(img.rows())) {
    throw std::invalid_argument("vertical step table shorter than image height");
  }
}

bool AngleCondition::operator()(Pixel a, Pixel b) const {
  const double alpha = a.row == b.row
                           ? params_.horizontal_step
                           : params_.vertical_steps[static_cast<std::size_t>(std::min(a.row, b.row))];
  return angle_beta<double>(img_->at(a), img_->at(b), alpha) > theta_rad_;
}

EuclideanCondition::EuclideanCondition(const RangeImage& img, const PointsRef& points,
                                       double max_distance)
    : img_(&img), points_(points), max_distance_sq_(max_distance * max_distance) {
  if (!(max_distance > 0.0)) {
    throw std::invalid_argument("euclidean threshold must be positive");
  }
}

bool EuclideanCondition::operator()(Pixel a, Pixel b) const {
  const auto ia = img_->point_index(a.row, a.col);
  const auto ib = img_->point_index(b.row, b.col);
  const auto d = (points_.row(ia).head<3>() - points_.row(ib).head<3>()).cast<double>();
  return d.squaredNorm() < max_distance_sq_;
}

}  // namespace dmc
