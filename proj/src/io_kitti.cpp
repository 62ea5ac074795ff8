#include "dmcluster/io_kitti.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <string>
#include <unordered_map>

namespace dmc {

namespace {

static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big);

std::uint32_t to_little(std::uint32_t v) {
  if constexpr (std::endian::native == std::endian::big) {
    return ((v & 0xffu) << 24) | ((v & 0xff00u) << 8) | ((v >> 8) & 0xff00u) | (v >> 24);
  }
  return v;
}

std::vector<std::uint32_t> read_words(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  in.seekg(0, std::ios::end);
  const auto bytes = static_cast<std::size_t>(in.tellg());
  in.seekg(0, std::ios::beg);
  if (bytes % 4 != 0) {
    throw IoError(path.string() + ": size " + std::to_string(bytes) + " is not a multiple of 4");
  }
  std::vector<std::uint32_t> words(bytes / 4);
  if (!in.read(reinterpret_cast<char*>(words.data()), static_cast<std::streamsize>(bytes))) {
    throw IoError(path.string() + ": truncated read");
  }
  for (auto& w : words) w = to_little(w);
  return words;
}

void write_words(std::span<const std::uint32_t> words, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot create " + path.string());
  for (std::uint32_t w : words) {
    const std::uint32_t le = to_little(w);
    out.write(reinterpret_cast<const char*>(&le), sizeof le);
  }
  if (!out) throw IoError(path.string() + ": write failed");
}

}  // namespace

PointCloud read_scan(const std::filesystem::path& path) {
  const std::vector<std::uint32_t> words = read_words(path);
  if (words.size() % 4 != 0) {
    throw IoError(path.string() + ": size is not a multiple of 16 bytes");
  }
  PointCloud cloud(static_cast<Eigen::Index>(words.size() / 4), 4);
  for (std::size_t i = 0; i < words.size(); ++i) {
    cloud.data()[i] = std::bit_cast<float>(words[i]);
  }
  check_finite(cloud);
  return cloud;
}

void write_scan(const PointsRef& points, const std::filesystem::path& path) {
  std::vector<std::uint32_t> words;
  words.reserve(static_cast<std::size_t>(points.rows()) * 4);
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    for (Eigen::Index k = 0; k < 4; ++k) words.push_back(std::bit_cast<std::uint32_t>(points(i, k)));
  }
  write_words(words, path);
}

PanopticFrame read_labels(const std::filesystem::path& path) {
  const std::vector<std::uint32_t> words = read_words(path);
  PanopticFrame frame;
  frame.semantics.resize(words.size());
  frame.instances.resize(words.size());
  for (std::size_t i = 0; i < words.size(); ++i) {
    frame.semantics[i] = words[i] & 0xffffu;
    frame.instances[i] = words[i] >> 16;
  }
  return frame;
}

PanopticFrame read_labels(const std::filesystem::path& path, std::size_t n_points) {
  PanopticFrame frame = read_labels(path);
  if (frame.semantics.size() != n_points) {
    throw IoError(path.string() + ": holds " + std::to_string(frame.semantics.size()) +
                  " labels, expected " + std::to_string(n_points));
  }
  return frame;
}

void write_labels(std::span<const std::uint32_t> semantics, std::span<const std::uint32_t> instances,
                  const std::filesystem::path& path) {
  if (semantics.size() != instances.size()) {
    throw std::invalid_argument("semantics and instances differ in length");
  }
  std::vector<std::uint32_t> words(semantics.size());
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (semantics[i] > 0xffffu || instances[i] > 0xffffu) {
      throw std::out_of_range("label " + std::to_string(i) + " does not fit in 16 bits");
    }
    words[i] = semantics[i] | (instances[i] << 16);
  }
  write_words(words, path);
}

namespace {

const std::unordered_map<std::uint32_t, std::uint32_t>& learning_table() {
  static const std::unordered_map<std::uint32_t, std::uint32_t> table = {
      {0, 0},    {1, 0},    {10, 1},   {11, 2},   {13, 5},   {15, 3},   {16, 5},
      {18, 4},   {20, 5},   {30, 6},   {31, 7},   {32, 8},   {40, 9},   {44, 10},
      {48, 11},  {49, 12},  {50, 13},  {51, 14},  {52, 0},   {60, 9},   {70, 15},
      {71, 16},  {72, 17},  {80, 18},  {81, 19},  {99, 0},   {252, 1},  {253, 7},
      {254, 6},  {255, 8},  {256, 5},  {257, 5},  {258, 4},  {259, 5},
  };
  return table;
}

}  // namespace

std::uint32_t learning_map(std::uint32_t raw) {
  const auto& table = learning_table();
  const auto it = table.find(raw);
  return it == table.end() ? 0 : it->second;
}

std::vector<std::uint32_t> learning_map(std::span<const std::uint32_t> raw) {
  std::vector<std::uint32_t> out(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) out[i] = learning_map(raw[i]);
  return out;
}

std::vector<std::uint32_t> semantic_kitti_thing_classes() {
  std::vector<std::uint32_t> out;
  for (const auto& [raw, id] : learning_table()) {
    if (id >= 1 && id <= 8) out.push_back(raw);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace dmc
