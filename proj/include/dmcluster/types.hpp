#pragma once

#include <Eigen/Core>

#include <compare>
#include <cstdint>

namespace dmc {

/// One LiDAR return per row: x, y, z in meters and remission in [0, 1].
using PointMatrix = Eigen::Matrix<float, Eigen::Dynamic, 4, Eigen::RowMajor>;
using PointCloud = PointMatrix;
using PointsRef = Eigen::Ref<const PointMatrix>;

template <typename Scalar>
using Grid = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Component labels over a range image; 0 means unlabeled.
using LabelImage = Grid<std::int32_t>;

/// m x m edge-vote counts between local labels, indexed by label - 1.
using VoteMatrix = Grid<std::int32_t>;

struct Pixel {
  int row = 0;
  int col = 0;

  friend constexpr auto operator<=>(const Pixel&, const Pixel&) = default;
};

struct PixelPair {
  Pixel a;
  Pixel b;
};

/// Throws std::invalid_argument if any coordinate or remission is NaN/Inf.
void check_finite(const PointsRef& points);

}  // namespace dmc
