#include "dmcluster/baseline_ccl.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <numbers>
#include <random>

using namespace dmc;

TEST_CASE("binary CCL examples") {
  CHECK(ccl_binary(BinaryImage::Zero(3, 3)).isZero());
  CHECK((ccl_binary(BinaryImage::Ones(3, 3)).array() == 1).all());

  BinaryImage corners = BinaryImage::Zero(3, 3);
  corners(0, 0) = corners(2, 2) = 1;
  const LabelImage l = ccl_binary(corners);
  CHECK(l(0, 0) == 1);
  CHECK(l(2, 2) == 2);
  CHECK(oracle::count_labels(l) == 2);

  BinaryImage diagonal = BinaryImage::Zero(2, 2);
  diagonal(0, 0) = diagonal(1, 1) = 1;
  CHECK(oracle::count_labels(ccl_binary(diagonal)) == 2);

  BinaryImage edges = BinaryImage::Zero(1, 4);
  edges(0, 0) = edges(0, 3) = 1;
  CHECK(oracle::count_labels(ccl_binary(edges)) == 2);
}

TEST_CASE("binary CCL agrees with union-find") {
  std::mt19937_64 rng(61);
  for (int i = 0; i < 100; ++i) {
    const double density = 0.1 + 0.8 * i / 99.0;
    const BinaryImage img = oracle::random_binary(64, 256, density, rng);
    CHECK(oracle::same_partition(ccl_binary(img), oracle::union_find_ccl(img)));
  }
}

TEST_CASE("depth cluster examples") {
  const auto step = 2 * std::numbers::pi / 2048;
  ConditionParams params;
  params.cols = 8;
  params.horizontal_step = step;
  params.vertical_steps = {step, step, step};

  SUBCASE("uniform plane") {
    const RangeImage img = oracle::range_patch(Grid<float>::Constant(4, 8, 12.f));
    CHECK(oracle::count_labels(depth_cluster(img, AngleCondition(img, params))) == 1);
  }
  SUBCASE("5 m and 50 m plateaus") {
    REQUIRE_FALSE(angle_condition(50.0, 5.0, step, 10.0));
    REQUIRE(oracle::beta_hp(50.0, 5.0, step) < 10 * std::numbers::pi / 180);
    Grid<float> r = Grid<float>::Constant(4, 8, 5.f);
    r.rightCols(4).setConstant(50.f);
    const RangeImage img = oracle::range_patch(r);
    // Without wrap the two plateaus touch across one column boundary only.
    const LabelImage l = depth_cluster(img, AngleCondition(img, params), false);
    CHECK(oracle::count_labels(l) == 2);
    CHECK((l.leftCols(4).array() == 1).all());
    CHECK((l.rightCols(4).array() == 2).all());
  }
  SUBCASE("empty image") {
    const RangeImage img = oracle::range_patch(Grid<float>::Constant(4, 8, -1.f));
    CHECK(depth_cluster(img, AngleCondition(img, params)).isZero());
  }
}

TEST_CASE("depth cluster with a constant-true predicate is binary CCL") {
  std::mt19937_64 rng(62);
  const auto always = [](Pixel, Pixel) { return true; };
  for (int i = 0; i < 30; ++i) {
    const BinaryImage bits = oracle::random_binary(32, 64, 0.2 + 0.02 * i, rng);
    const RangeImage img = occupancy_image(bits);
    CHECK(img.occupied_count() == static_cast<std::size_t>((bits.array() != 0).count()));
    CHECK(oracle::same_partition(depth_cluster(img, always, false), ccl_binary(bits)));
  }
}
