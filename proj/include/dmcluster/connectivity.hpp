#pragma once

#include "dmcluster/range_image.hpp"
#include "dmcluster/types.hpp"

#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace dmc {

/// Angle between the far beam and the segment joining two neighboring returns.
///
/// d_a, d_b are ranges of the two returns and alpha the angle between their
/// beams. With d1 the larger and d2 the smaller range,
///   beta = atan2(d2 sin(alpha), d1 - d2 cos(alpha)).
/// atan2 keeps beta correct past 90 degrees.
template <typename Scalar>
Scalar angle_beta(Scalar d_a, Scalar d_b, Scalar alpha) {
  if (!(d_a > Scalar(0)) || !(d_b > Scalar(0))) {
    throw std::invalid_argument("angle condition needs positive ranges");
  }
  using std::atan2, std::cos, std::sin;
  const Scalar d1 = d_a > d_b ? d_a : d_b;
  const Scalar d2 = d_a > d_b ? d_b : d_a;
  return atan2(d2 * sin(alpha), d1 - d2 * cos(alpha));
}

/// True when two neighboring returns look like the same surface: beta > theta.
template <typename Scalar>
bool angle_condition(Scalar d_a, Scalar d_b, Scalar alpha, Scalar theta_deg) {
  return angle_beta(d_a, d_b, alpha) > theta_deg * std::numbers::pi_v<Scalar> / Scalar(180);
}

/// Up to four 4-connected neighbors of a pixel.
class Neighborhood {
 public:
  using const_iterator = std::array<Pixel, 4>::const_iterator;

  void push(Pixel p);
  std::size_t size() const { return size_; }
  const_iterator begin() const { return items_.begin(); }
  const_iterator end() const { return items_.begin() + static_cast<std::ptrdiff_t>(size_); }
  const Pixel& operator[](std::size_t i) const { return items_[i]; }

 private:
  std::array<Pixel, 4> items_{};
  std::size_t size_ = 0;
};

/// Up, down, left, right. Rows never wrap; columns wrap modulo `cols` when
/// `wrap` is set. The query pixel and duplicates are never returned.
Neighborhood neighborhood(Pixel p, int rows, int cols, bool wrap = true);

struct ConditionParams {
  double theta_deg = 10.0;
  /// Azimuth increment between adjacent columns.
  double horizontal_step = 2.0 * std::numbers::pi / 2048.0;
  /// vertical_steps[r] is the elevation increment between rows r and r + 1.
  std::vector<double> vertical_steps;
  /// Image width, used to recognize wrapped horizontal pairs. 0 disables wrap.
  int cols = 2048;

  void validate() const;
};

/// Uniform row spacing derived from the projection field of view.
ConditionParams condition_params(const ProjectionConfig& proj, double theta_deg = 10.0);

/// Beam separation for a 4-adjacent pixel pair. Throws for non-adjacent pairs.
double pair_alpha(const PixelPair& pair, const ConditionParams& params);

/// Default pair predicate: the angle condition on range-image pixels.
class AngleCondition {
 public:
  AngleCondition(const RangeImage& img, ConditionParams params);

  bool operator()(Pixel a, Pixel b) const;

 private:
  const RangeImage* img_;
  ConditionParams params_;
  double theta_rad_;
};

/// Comparison predicate: Euclidean distance between the two returns below a
/// threshold.
class EuclideanCondition {
 public:
  EuclideanCondition(const RangeImage& img, const PointsRef& points, double max_distance);

  bool operator()(Pixel a, Pixel b) const;

 private:
  const RangeImage* img_;
  PointsRef points_;
  double max_distance_sq_;
};

}  // namespace dmc
