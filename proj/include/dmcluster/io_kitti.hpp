#pragma once

#include "dmcluster/metrics.hpp"
#include "dmcluster/types.hpp"

#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <vector>

namespace dmc {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Packed little-endian float32 (x, y, z, remission) records.
PointCloud read_scan(const std::filesystem::path& path);
void write_scan(const PointsRef& points, const std::filesystem::path& path);

/// Packed little-endian uint32 words: class in the low 16 bits, instance in
/// the high 16 bits. The file must hold exactly `n_points` words.
PanopticFrame read_labels(const std::filesystem::path& path, std::size_t n_points);

/// Label file with any number of words; the count is taken from the size.
PanopticFrame read_labels(const std::filesystem::path& path);

/// Inverse of read_labels. Throws if a class or instance id needs more than
/// 16 bits.
void write_labels(std::span<const std::uint32_t> semantics, std::span<const std::uint32_t> instances,
                  const std::filesystem::path& path);

/// Raw SemanticKITTI class id -> 0..19 training id (0 = ignore).
std::uint32_t learning_map(std::uint32_t raw);
std::vector<std::uint32_t> learning_map(std::span<const std::uint32_t> raw);

/// Raw SemanticKITTI ids that map to the eight thing classes (car, bicycle,
/// motorcycle, truck, other-vehicle, person, bicyclist, motorcyclist),
/// moving variants included. Sorted.
std::vector<std::uint32_t> semantic_kitti_thing_classes();

}  // namespace dmc
