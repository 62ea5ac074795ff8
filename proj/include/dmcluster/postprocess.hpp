#pragma once

#include "dmcluster/types.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace dmc {

/// Axis-aligned ground-plane rectangle of one (instance, class) point set.
template <typename Scalar>
struct BevFootprint {
  std::uint32_t instance = 0;
  std::uint32_t semantic = 0;
  Scalar min_x = 0, max_x = 0, min_y = 0, max_y = 0;

  /// Closed intersection: rectangles that only touch still overlap.
  bool overlaps(const BevFootprint& o) const {
    return min_x <= o.max_x && o.min_x <= max_x && min_y <= o.max_y && o.min_y <= max_y;
  }
};

/// Footprints of every (instance > 0, semantic) group present in the frame.
std::vector<BevFootprint<float>> bev_footprints(std::span<const std::uint32_t> instances,
                                                std::span<const std::uint32_t> semantics,
                                                const PointsRef& points);

/// Merges instances of the same class whose bird's-eye-view rectangles
/// overlap, relabelling each merged group to its smallest instance id.
/// Repeats until no more rectangles overlap, so the result is a fixed point.
/// Points with instance 0 are untouched; classes never mix.
std::vector<std::uint32_t> bev_merge(std::span<const std::uint32_t> instances,
                                     std::span<const std::uint32_t> semantics,
                                     const PointsRef& points);

}  // namespace dmc
