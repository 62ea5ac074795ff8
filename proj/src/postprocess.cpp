#include "dmcluster/postprocess.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>
#include <utility>

namespace dmc {

namespace {

using GroupKey = std::pair<std::uint32_t, std::uint32_t>;  // (semantic, instance)

void check_lengths(std::span<const std::uint32_t> instances,
                   std::span<const std::uint32_t> semantics, const PointsRef& points) {
  if (instances.size() != semantics.size() ||
      instances.size() != static_cast<std::size_t>(points.rows())) {
    throw std::invalid_argument("instances, semantics and points must share one length");
  }
}

}  // namespace

std::vector<BevFootprint<float>> bev_footprints(std::span<const std::uint32_t> instances,
                                                std::span<const std::uint32_t> semantics,
                                                const PointsRef& points) {
  check_lengths(instances, semantics, points);
  std::map<GroupKey, BevFootprint<float>> groups;
  for (std::size_t i = 0; i < instances.size(); ++i) {
    if (instances[i] == 0) continue;
    const float x = points(i, 0), y = points(i, 1);
    auto [it, inserted] = groups.try_emplace({semantics[i], instances[i]});
    BevFootprint<float>& f = it->second;
    if (inserted) {
      f = {instances[i], semantics[i], x, x, y, y};
    } else {
      f.min_x = std::min(f.min_x, x);
      f.max_x = std::max(f.max_x, x);
      f.min_y = std::min(f.min_y, y);
      f.max_y = std::max(f.max_y, y);
    }
  }
  std::vector<BevFootprint<float>> out;
  out.reserve(groups.size());
  for (auto& [key, f] : groups) out.push_back(f);
  return out;
}

std::vector<std::uint32_t> bev_merge(std::span<const std::uint32_t> instances,
                                     std::span<const std::uint32_t> semantics,
                                     const PointsRef& points) {
  std::vector<std::uint32_t> labels(instances.begin(), instances.end());

  while (true) {
    const auto footprints = bev_footprints(labels, semantics, points);
    const std::size_t k = footprints.size();

    std::vector<std::size_t> parent(k);
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto find = [&](std::size_t i) {
      while (parent[i] != i) i = parent[i] = parent[parent[i]];
      return i;
    };

    bool merged = false;
    for (std::size_t a = 0; a < k; ++a) {
      for (std::size_t b = a + 1; b < k; ++b) {
        // Footprints are sorted by (semantic, instance).
        if (footprints[b].semantic != footprints[a].semantic) break;
        if (!footprints[a].overlaps(footprints[b])) continue;
        const std::size_t ra = find(a), rb = find(b);
        if (ra != rb) {
          parent[std::max(ra, rb)] = std::min(ra, rb);
          merged = true;
        }
      }
    }
    if (!merged) break;

    // Within one class the smallest instance id sorts first, so the root
    // carries the group's smallest id.
    std::map<GroupKey, std::uint32_t> remap;
    for (std::size_t i = 0; i < k; ++i) {
      remap[{footprints[i].semantic, footprints[i].instance}] = footprints[find(i)].instance;
    }
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (labels[i] == 0) continue;
      labels[i] = remap.at({semantics[i], labels[i]});
    }
  }
  return labels;
}

}  // namespace dmc
