#pragma once

#include "dmcluster/connectivity.hpp"
#include "dmcluster/range_image.hpp"
#include "dmcluster/types.hpp"

#include <concepts>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace dmc {

/// Any callable deciding whether two occupied neighbor pixels connect.
template <typename F>
concept PairPredicate = std::predicate<const F&, Pixel, Pixel>;

struct VoxelGridConfig {
  double edge = 0.5;  ///< cubic voxel edge in meters
};

using SeedList = std::vector<Pixel>;

/// One seed pixel per non-empty voxel of edge `cfg.edge`, anchored at the
/// origin. Only points with mask[i] set that won their pixel take part; the
/// lowest such point index represents each voxel. Seeds are ordered by that
/// index. An empty mask selects every visible point.
SeedList select_seeds(const PointsRef& points, const RangeImage& img, std::span<const bool> mask,
                      const VoxelGridConfig& cfg);

struct DivideStats {
  std::int64_t pops = 0;
  std::int64_t neighbor_evals = 0;
  std::int64_t undecided = 0;

  std::int64_t operations() const { return pops + neighbor_evals + undecided; }
};

struct LocalClusterResult {
  LabelImage labels;
  VoteMatrix v_plus;
  VoteMatrix v_minus;
  DivideStats stats;

  int seed_count() const { return static_cast<int>(v_plus.rows()); }
};

struct LocalClusterOptions {
  bool wrap = true;
};

namespace detail {
void validate_seeds(const RangeImage& img, std::span<const Pixel> seeds);
void add_symmetric(VoteMatrix& votes, std::int32_t label_a, std::int32_t label_b);
}  // namespace detail

/// Voxel-seeded local clustering.
///
/// Every seed starts its own queue with label i + 1. Queues are served
/// round-robin, one pop each per round, until all are empty. For each
/// occupied neighbor of a popped pixel:
///   condition and unlabeled   -> claim it and enqueue
///   condition and other label -> symmetric V+ vote
///   !condition and other label -> symmetric V- vote
///   !condition and unlabeled  -> defer to the undecided list
/// Deferred pairs whose neighbor ends up with a different label cast one
/// symmetric V- vote. Same-label encounters cast nothing.
template <PairPredicate Condition>
LocalClusterResult local_cluster(const RangeImage& img, std::span<const Pixel> seeds,
                                 const Condition& condition, LocalClusterOptions options = {}) {
  detail::validate_seeds(img, seeds);
  const int rows = img.rows();
  const int cols = img.cols();
  const auto m = static_cast<Eigen::Index>(seeds.size());

  LocalClusterResult out;
  out.labels = LabelImage::Zero(rows, cols);
  out.v_plus = VoteMatrix::Zero(m, m);
  out.v_minus = VoteMatrix::Zero(m, m);

  // Each queue is a vector with a read cursor; nothing is ever re-pushed.
  struct Queue {
    std::vector<Pixel> items;
    std::size_t head = 0;
    bool empty() const { return head == items.size(); }
  };
  std::vector<Queue> queues(seeds.size());
  std::vector<std::size_t> live(seeds.size());
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    queues[i].items.push_back(seeds[i]);
    out.labels(seeds[i].row, seeds[i].col) = static_cast<std::int32_t>(i + 1);
    live[i] = i;
  }

  std::vector<std::pair<Pixel, Pixel>> undecided;
  auto& labels = out.labels;

  while (!live.empty()) {
    std::size_t kept = 0;
    for (std::size_t q : live) {
      Queue& queue = queues[q];
      const Pixel p = queue.items[queue.head++];
      ++out.stats.pops;
      const std::int32_t label = labels(p.row, p.col);

      for (const Pixel& n : neighborhood(p, rows, cols, options.wrap)) {
        if (!img.occupied(n)) continue;
        ++out.stats.neighbor_evals;
        const bool connected = condition(p, n);
        std::int32_t& other = labels(n.row, n.col);
        if (other == 0) {
          if (connected) {
            other = label;
            queue.items.push_back(n);
          } else {
            undecided.emplace_back(p, n);
          }
        } else if (other != label) {
          detail::add_symmetric(connected ? out.v_plus : out.v_minus, label, other);
        }
      }
      if (!queue.empty()) live[kept++] = q;
    }
    live.resize(kept);
  }

  out.stats.undecided = static_cast<std::int64_t>(undecided.size());
  for (const auto& [p, n] : undecided) {
    const std::int32_t a = labels(p.row, p.col);
    const std::int32_t b = labels(n.row, n.col);
    if (b != 0 && b != a) detail::add_symmetric(out.v_minus, a, b);
  }
  return out;
}

}  // namespace dmc
