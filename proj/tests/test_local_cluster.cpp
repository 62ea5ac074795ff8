#include "dmcluster/local_cluster.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <algorithm>
#include <numbers>
#include <random>
#include <set>

using namespace dmc;

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

ConditionParams patch_params(int rows, int cols) {
  ConditionParams p;
  p.cols = cols;
  p.horizontal_step = 0.2 * kDeg;
  p.vertical_steps.assign(static_cast<std::size_t>(std::max(rows - 1, 0)), 0.4 * kDeg);
  return p;
}

const auto always = [](Pixel, Pixel) { return true; };

// A few depth plateaus with jitter and holes.
Grid<float> random_ranges(int rows, int cols, std::mt19937_64& rng) {
  std::uniform_real_distribution<float> u(0.f, 1.f);
  const float levels[] = {5.f, 8.f, 20.f, 40.f};
  Grid<float> r(rows, cols);
  int level = 0;
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      if (u(rng) < 0.08f) level = static_cast<int>(u(rng) * 4) % 4;
      r(i, j) = u(rng) < 0.1f ? -1.f : levels[level] * (1.f + 0.01f * u(rng));
    }
  }
  return r;
}

SeedList random_seeds(const RangeImage& img, int count, std::mt19937_64& rng) {
  SeedList occupied;
  for (int r = 0; r < img.rows(); ++r) {
    for (int c = 0; c < img.cols(); ++c) {
      if (img.occupied({r, c})) occupied.push_back({r, c});
    }
  }
  std::shuffle(occupied.begin(), occupied.end(), rng);
  occupied.resize(std::min<std::size_t>(occupied.size(), static_cast<std::size_t>(count)));
  return occupied;
}

}  // namespace

TEST_CASE("1x4 strip with constant range splits down the middle") {
  Grid<float> r = Grid<float>::Constant(1, 4, 10.f);
  const RangeImage img = oracle::range_patch(r);
  const Pixel seeds[] = {{0, 0}, {0, 3}};
  const auto out = local_cluster(img, seeds, AngleCondition(img, patch_params(1, 4)), {false});

  CHECK(out.labels(0, 0) == 1);
  CHECK(out.labels(0, 1) == 1);
  CHECK(out.labels(0, 2) == 2);
  CHECK(out.labels(0, 3) == 2);
  CHECK(out.v_plus(0, 1) == 2);
  CHECK(out.v_plus(1, 0) == 2);
  CHECK(out.v_minus.isZero());
}

TEST_CASE("1x4 strip across a depth step votes against") {
  Grid<float> r(1, 4);
  r << 5.f, 5.f, 50.f, 50.f;
  const RangeImage img = oracle::range_patch(r);
  const Pixel seeds[] = {{0, 0}, {0, 3}};
  const auto out = local_cluster(img, seeds, AngleCondition(img, patch_params(1, 4)), {false});

  CHECK(out.v_minus(0, 1) == 2);
  CHECK(out.v_minus(1, 0) == 2);
  CHECK(out.v_plus.isZero());
}

TEST_CASE("one seed takes its whole region") {
  const RangeImage img = oracle::range_patch(Grid<float>::Constant(3, 3, 5.f));
  const Pixel seeds[] = {{1, 1}};
  const auto out = local_cluster(img, seeds, always);
  CHECK((out.labels.array() == 1).all());
  CHECK(out.v_plus.rows() == 1);
  CHECK(out.v_plus.isZero());
  CHECK(out.v_minus.isZero());
}

TEST_CASE("two seeds in one 4x4 patch share only positive votes") {
  const RangeImage img = oracle::range_patch(Grid<float>::Constant(4, 4, 10.f));
  const Pixel seeds[] = {{0, 0}, {3, 3}};
  const auto out = local_cluster(img, seeds, AngleCondition(img, patch_params(4, 4)), {false});
  CHECK((out.labels.array() > 0).all());
  CHECK((out.labels.array() == 1).count() == 8);
  CHECK(out.v_plus(0, 1) > 0);
  CHECK(out.v_plus(0, 1) == out.v_plus(1, 0));
  CHECK(out.v_minus.isZero());
}

TEST_CASE("two plateaus split by a failing boundary") {
  Grid<float> r(4, 4);
  r << 5, 5, 50, 50,  //
      5, 5, 50, 50,   //
      5, 5, 50, 50,   //
      5, 5, 50, 50;
  const RangeImage img = oracle::range_patch(r);
  const Pixel seeds[] = {{0, 0}, {0, 3}};
  const auto out = local_cluster(img, seeds, AngleCondition(img, patch_params(4, 4)), {false});
  CHECK(out.v_plus(0, 1) == 0);
  // Four boundary pairs, each scanned from both sides.
  CHECK(out.v_minus(0, 1) == 8);
  CHECK((out.labels.leftCols(2).array() == 1).all());
  CHECK((out.labels.rightCols(2).array() == 2).all());
}

TEST_CASE("unreachable pixels stay unlabeled") {
  Grid<float> r(1, 5);
  r << 5, 5, -1, 9, 9;
  const RangeImage img = oracle::range_patch(r);
  const Pixel seeds[] = {{0, 0}};
  const auto out = local_cluster(img, seeds, always, {false});
  CHECK(out.labels(0, 1) == 1);
  CHECK(out.labels(0, 3) == 0);
  CHECK(out.labels(0, 4) == 0);
}

TEST_CASE("wrap connects the first and last column") {
  Grid<float> r(1, 6);
  r << 5, -1, -1, -1, -1, 5;
  const RangeImage img = oracle::range_patch(r);
  const Pixel seeds[] = {{0, 0}};
  CHECK(local_cluster(img, seeds, always, {true}).labels(0, 5) == 1);
  CHECK(local_cluster(img, seeds, always, {false}).labels(0, 5) == 0);
}

TEST_CASE("bad seeds are rejected") {
  Grid<float> r(1, 3);
  r << 5, -1, 5;
  const RangeImage img = oracle::range_patch(r);
  const Pixel empty[] = {{0, 1}};
  const Pixel outside[] = {{1, 0}};
  const Pixel twice[] = {{0, 0}, {0, 0}};
  CHECK_THROWS_AS(local_cluster(img, empty, always), std::invalid_argument);
  CHECK_THROWS_AS(local_cluster(img, outside, always), std::invalid_argument);
  CHECK_THROWS_AS(local_cluster(img, twice, always), std::invalid_argument);
}

TEST_CASE("no seeds leaves the image unlabeled") {
  const RangeImage img = oracle::range_patch(Grid<float>::Constant(2, 2, 5.f));
  const auto out = local_cluster(img, std::span<const Pixel>{}, always);
  CHECK(out.labels.isZero());
  CHECK(out.v_plus.size() == 0);
}

TEST_CASE("property: labels, reachability and vote totals on random patches") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 60; ++trial) {
    const int rows = 8 + trial % 9, cols = 16 + 3 * (trial % 7);
    const RangeImage img = oracle::range_patch(random_ranges(rows, cols, rng));
    const SeedList seeds = random_seeds(img, 1 + trial % 12, rng);
    const bool wrap = trial % 2 == 0;
    const AngleCondition cond(img, patch_params(rows, cols));
    const auto out = local_cluster(img, seeds, cond, {wrap});
    const auto m = static_cast<std::int32_t>(seeds.size());

    // Label conservation.
    CHECK(out.labels.minCoeff() >= 0);
    CHECK(out.labels.maxCoeff() <= m);
    for (std::int32_t i = 0; i < m; ++i) CHECK(out.labels(seeds[i].row, seeds[i].col) == i + 1);

    // Labeled set equals the set reachable from any seed through passing pairs.
    Grid<std::uint8_t> reach = Grid<std::uint8_t>::Zero(rows, cols);
    std::vector<Pixel> queue(seeds.begin(), seeds.end());
    for (const Pixel& s : seeds) reach(s.row, s.col) = 1;
    for (std::size_t h = 0; h < queue.size(); ++h) {
      for (const Pixel& n : neighborhood(queue[h], rows, cols, wrap)) {
        if (img.occupied(n) && !reach(n.row, n.col) && cond(queue[h], n)) {
          reach(n.row, n.col) = 1;
          queue.push_back(n);
        }
      }
    }
    std::int64_t labeled = 0;
    for (int i = 0; i < rows; ++i) {
      for (int j = 0; j < cols; ++j) {
        CHECK((out.labels(i, j) != 0) == (reach(i, j) != 0));
        if (out.labels(i, j) != 0) CHECK(img.occupied({i, j}));
        labeled += out.labels(i, j) != 0;
      }
    }

    // Visit bounds.
    const auto occupied = static_cast<std::int64_t>(img.occupied_count());
    CHECK(out.stats.pops == labeled);
    CHECK(out.stats.pops <= occupied);
    CHECK(out.stats.neighbor_evals <= 4 * occupied);

    // Symmetric matrices with an empty diagonal.
    CHECK(out.v_plus == out.v_plus.transpose());
    CHECK(out.v_minus == out.v_minus.transpose());
    CHECK(out.v_plus.diagonal().isZero());
    CHECK(out.v_minus.diagonal().isZero());

    // Every cross-label adjacent pair is scanned from both sides and each
    // scan casts one symmetric vote of the predicate's sign.
    VoteMatrix plus = VoteMatrix::Zero(m, m), minus = VoteMatrix::Zero(m, m);
    for (int i = 0; i < rows; ++i) {
      for (int j = 0; j < cols; ++j) {
        const Pixel p{i, j};
        const std::int32_t a = out.labels(i, j);
        if (!a) continue;
        for (const Pixel& n : neighborhood(p, rows, cols, wrap)) {
          const std::int32_t b = out.labels(n.row, n.col);
          if (!b || b == a) continue;
          // Each unordered pair is met twice here, once from each end.
          (cond(p, n) ? plus : minus)(a - 1, b - 1) += 2;
        }
      }
    }
    CHECK(out.v_plus == plus);
    CHECK(out.v_minus == minus);
  }
}

TEST_CASE("property: local clustering is deterministic") {
  std::mt19937_64 rng(32);
  const RangeImage img = oracle::range_patch(random_ranges(32, 64, rng));
  const SeedList seeds = random_seeds(img, 20, rng);
  const AngleCondition cond(img, patch_params(32, 64));
  const auto a = local_cluster(img, seeds, cond);
  const auto b = local_cluster(img, seeds, cond);
  CHECK(a.labels == b.labels);
  CHECK(a.v_plus == b.v_plus);
  CHECK(a.v_minus == b.v_minus);
}

TEST_CASE("select_seeds examples") {
  const ProjectionConfig proj;
  SUBCASE("nothing masked in") {
    PointCloud pc(2, 4);
    pc << 5, 0, 0, 0, 6, 1, 0, 0;
    const RangeImage img = project(pc, proj);
    const bool mask[] = {false, false};
    CHECK(select_seeds(pc, img, mask, {0.5}).empty());
  }
  SUBCASE("three points in one voxel") {
    PointCloud pc(3, 4);
    pc << 10.1f, 0.1f, -0.1f, 0,  //
        10.2f, 0.2f, -0.2f, 0,    //
        10.3f, 0.3f, -0.3f, 0;
    const RangeImage img = project(pc, proj);
    REQUIRE(img.occupied_count() == 3);
    const SeedList seeds = select_seeds(pc, img, {}, {0.5});
    REQUIRE(seeds.size() == 1);
    CHECK(img.point_index(seeds[0].row, seeds[0].col) == 0);
  }
  SUBCASE("two voxels along x") {
    PointCloud pc(2, 4);
    pc << 0.1f, 0.1f, 0.1f, 0,  //
        0.9f, 0.1f, 0.1f, 0;
    const RangeImage img = project(pc, proj);
    CHECK(select_seeds(pc, img, {}, {0.5}).size() == 2);
    CHECK(select_seeds(pc, img, {}, {1.0}).size() == 1);
  }
  SUBCASE("invalid edge") {
    PointCloud pc(0, 4);
    const RangeImage img = project(pc, proj);
    CHECK_THROWS_AS(select_seeds(pc, img, {}, {0.0}), std::invalid_argument);
  }
}

TEST_CASE("property: one seed per occupied voxel, ordered by point index") {
  std::mt19937_64 rng(33);
  std::uniform_real_distribution<float> xy(-20.f, 20.f), z(-2.f, 1.f);
  PointCloud pc(4000, 4);
  for (Eigen::Index i = 0; i < pc.rows(); ++i) pc.row(i) << xy(rng), xy(rng), z(rng), 0.f;
  const RangeImage img = project(pc, {});
  for (double l : {0.25, 0.5, 1.0, 2.0}) {
    const SeedList seeds = select_seeds(pc, img, {}, {l});
    std::set<std::tuple<long, long, long>> voxels;
    for (Eigen::Index i = 0; i < pc.rows(); ++i) {
      const Pixel p = img.pixel(img.pixel_of_point[i]);
      if (img.point_index(p.row, p.col) != i) continue;
      voxels.emplace(static_cast<long>(std::floor(pc(i, 0) / l)),
                     static_cast<long>(std::floor(pc(i, 1) / l)),
                     static_cast<long>(std::floor(pc(i, 2) / l)));
    }
    CHECK(seeds.size() == voxels.size());
    for (std::size_t k = 1; k < seeds.size(); ++k) {
      CHECK(img.point_index(seeds[k - 1].row, seeds[k - 1].col) <
            img.point_index(seeds[k].row, seeds[k].col));
    }
  }
}
