#include "dmcluster/baseline_ccl.hpp"

namespace dmc {

LabelImage ccl_binary(const BinaryImage& img) {
  const auto rows = static_cast<int>(img.rows());
  const auto cols = static_cast<int>(img.cols());
  LabelImage labels = LabelImage::Zero(rows, cols);
  std::vector<Pixel> queue;
  std::int32_t next = 0;

  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      if (img(r, c) == 0 || labels(r, c) != 0) continue;
      const std::int32_t label = ++next;
      labels(r, c) = label;
      queue.assign(1, Pixel{r, c});
      for (std::size_t head = 0; head < queue.size(); ++head) {
        for (const Pixel& n : neighborhood(queue[head], rows, cols, false)) {
          if (img(n.row, n.col) == 0 || labels(n.row, n.col) != 0) continue;
          labels(n.row, n.col) = label;
          queue.push_back(n);
        }
      }
    }
  }
  return labels;
}

RangeImage occupancy_image(const BinaryImage& bits) {
  const auto rows = bits.rows();
  const auto cols = bits.cols();
  RangeImage img;
  img.range = Grid<float>::Constant(rows, cols, RangeImage::kEmptyRange);
  img.point_index = Grid<std::int32_t>::Constant(rows, cols, RangeImage::kNoPoint);
  std::int32_t next = 0;
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) {
      if (bits(r, c) == 0) continue;
      img.range(r, c) = 1.0f;
      img.point_index(r, c) = next++;
      img.pixel_of_point.push_back(static_cast<std::int32_t>(r * cols + c));
    }
  }
  return img;
}

}  // namespace dmc
