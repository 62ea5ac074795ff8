#include "dmcluster/local_cluster.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <unordered_set>

namespace dmc {

namespace {

struct VoxelKey {
  std::int64_t x, y, z;
  bool operator==(const VoxelKey&) const = default;
};

struct VoxelKeyHash {
  std::size_t operator()(const VoxelKey& k) const {
    // Large primes from the spatial hashing literature.
    return static_cast<std::size_t>(k.x * 73856093LL) ^ static_cast<std::size_t>(k.y * 19349663LL) ^
           static_cast<std::size_t>(k.z * 83492791LL);
  }
};

}  // namespace

SeedList select_seeds(const PointsRef& points, const RangeImage& img, std::span<const bool> mask,
                      const VoxelGridConfig& cfg) {
  if (!(cfg.edge > 0.0)) {
    throw std::invalid_argument("voxel edge must be positive");
  }
  const auto n = static_cast<std::size_t>(points.rows());
  if (!mask.empty() && mask.size() != n) {
    throw std::invalid_argument("seed mask length differs from point count");
  }
  if (img.pixel_of_point.size() != n) {
    throw std::invalid_argument("range image was projected from a different cloud");
  }

  const double inv = 1.0 / cfg.edge;
  std::unordered_set<VoxelKey, VoxelKeyHash> seen;
  SeedList seeds;
  for (std::size_t i = 0; i < n; ++i) {
    if (!mask.empty() && !mask[i]) continue;
    const std::int32_t flat = img.pixel_of_point[i];
    if (flat == RangeImage::kNoPoint) continue;
    const Pixel p = img.pixel(flat);
    if (img.point_index(p.row, p.col) != static_cast<std::int32_t>(i)) continue;

    const VoxelKey key{static_cast<std::int64_t>(std::floor(points(i, 0) * inv)),
                       static_cast<std::int64_t>(std::floor(points(i, 1) * inv)),
                       static_cast<std::int64_t>(std::floor(points(i, 2) * inv))};
    if (seen.insert(key).second) seeds.push_back(p);
  }
  return seeds;
}

namespace detail {

void validate_seeds(const RangeImage& img, std::span<const Pixel> seeds) {
  Grid<bool> used = Grid<bool>::Constant(img.rows(), img.cols(), false);
  for (const Pixel& s : seeds) {
    if (s.row < 0 || s.row >= img.rows() || s.col < 0 || s.col >= img.cols()) {
      throw std::invalid_argument("seed (" + std::to_string(s.row) + ", " + std::to_string(s.col) +
                                  ") outside the image");
    }
    if (!img.occupied(s)) {
      throw std::invalid_argument("seed (" + std::to_string(s.row) + ", " + std::to_string(s.col) +
                                  ") is an empty pixel");
    }
    if (used(s.row, s.col)) {
      throw std::invalid_argument("duplicate seed (" + std::to_string(s.row) + ", " +
                                  std::to_string(s.col) + ")");
    }
    used(s.row, s.col) = true;
  }
}

void add_symmetric(VoteMatrix& votes, std::int32_t label_a, std::int32_t label_b) {
  votes(label_a - 1, label_b - 1) += 1;
  votes(label_b - 1, label_a - 1) += 1;
}

}  // namespace detail
}  // namespace dmc
