#pragma once

#include "dmcluster/connectivity.hpp"
#include "dmcluster/local_cluster.hpp"
#include "dmcluster/range_image.hpp"
#include "dmcluster/types.hpp"

#include <cstdint>
#include <vector>

namespace dmc {

using BinaryImage = Grid<std::uint8_t>;

/// 4-connected labeling of the non-zero pixels of a binary image, without
/// column wrap. Labels are 1..k in row-major discovery order.
LabelImage ccl_binary(const BinaryImage& img);

/// Range image whose occupied pixels are the set bits of `bits`, all at range
/// 1 and indexed in row-major order. Lets binary images run through the
/// range-image clusterers.
RangeImage occupancy_image(const BinaryImage& bits);

/// Single-pass range-image CCL: every unlabeled occupied pixel, in row-major
/// order, opens a new label and grows breadth-first through neighbors that
/// satisfy `condition`.
template <PairPredicate Condition>
LabelImage depth_cluster(const RangeImage& img, const Condition& condition, bool wrap = true) {
  const int rows = img.rows();
  const int cols = img.cols();
  LabelImage labels = LabelImage::Zero(rows, cols);
  std::vector<Pixel> queue;
  std::int32_t next = 0;

  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const Pixel start{r, c};
      if (!img.occupied(start) || labels(r, c) != 0) continue;
      const std::int32_t label = ++next;
      labels(r, c) = label;
      queue.assign(1, start);
      for (std::size_t head = 0; head < queue.size(); ++head) {
        const Pixel p = queue[head];
        for (const Pixel& n : neighborhood(p, rows, cols, wrap)) {
          if (!img.occupied(n) || labels(n.row, n.col) != 0) continue;
          if (!condition(p, n)) continue;
          labels(n.row, n.col) = label;
          queue.push_back(n);
        }
      }
    }
  }
  return labels;
}

}  // namespace dmc
