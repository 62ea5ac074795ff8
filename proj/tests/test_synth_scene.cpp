#include "dmcluster/synth_scene.hpp"

#include <doctest.h>

#include <set>

using namespace dmc;

namespace {

SceneSpec box_scene(std::initializer_list<double> lateral, double width = 2.0) {
  SceneSpec spec;
  for (double y : lateral) {
    spec.objects.push_back({Box{Eigen::Vector3d(10, y, -1.73 + 0.75), Eigen::Vector3d(2, width, 1.5), 0.0}, 10, true});
  }
  return spec;
}

}  // namespace

TEST_CASE("an empty scene returns nothing") {
  const SyntheticFrame f = synth_scene({}, 1);
  CHECK(f.cloud.rows() == 0);
  CHECK(f.truth.semantics.empty());
}

TEST_CASE("a single box is a single instance") {
  const SyntheticFrame f = synth_scene(box_scene({0.0}), 1);
  REQUIRE(f.cloud.rows() > 100);
  CHECK(std::set<std::uint32_t>(f.truth.instances.begin(), f.truth.instances.end()) ==
        std::set<std::uint32_t>{1});
  CHECK(std::set<std::uint32_t>(f.truth.semantics.begin(), f.truth.semantics.end()) ==
        std::set<std::uint32_t>{10});
  // The near face sits at x = 9.
  CHECK(f.cloud.col(0).minCoeff() == doctest::Approx(9.0).epsilon(1e-4));
}

TEST_CASE("two boxes half a meter apart stay separate in the image") {
  const SyntheticFrame f = synth_scene(box_scene({-1.25, 1.25}), 1);
  const ProjectionConfig proj = SensorModel{}.projection();
  std::set<int> cols[2];
  for (Eigen::Index i = 0; i < f.cloud.rows(); ++i) {
    Pixel p;
    REQUIRE(project_point(f.cloud(i, 0), f.cloud(i, 1), f.cloud(i, 2), proj, p));
    cols[f.truth.instances[i] - 1].insert(p.col);
  }
  REQUIRE_FALSE(cols[0].empty());
  REQUIRE_FALSE(cols[1].empty());
  // At 10 m a 0.5 m gap spans roughly 16 empty columns.
  const int gap = std::max(*cols[0].begin(), *cols[1].begin()) -
                  std::min(*cols[0].rbegin(), *cols[1].rbegin()) - 1;
  CHECK(gap >= 10);
}

TEST_CASE("ground and stuff primitives carry instance 0") {
  SceneSpec spec = box_scene({0.0});
  spec.ground_z = -1.73;
  spec.objects.push_back({Box{Eigen::Vector3d(0, 20, 2), Eigen::Vector3d(10, 0.5, 8), 0.0}, 50, false});
  const SyntheticFrame f = synth_scene(spec, 3);
  std::set<std::uint32_t> stuff_instances;
  for (std::size_t i = 0; i < f.truth.semantics.size(); ++i) {
    if (f.truth.semantics[i] != 10) stuff_instances.insert(f.truth.instances[i]);
  }
  CHECK(stuff_instances == std::set<std::uint32_t>{0});
}

TEST_CASE("cylinders are hit") {
  SceneSpec spec;
  spec.objects.push_back({Cylinder{Eigen::Vector3d(8, 0, -1.73), 0.3, 1.8}, 30, true});
  const SyntheticFrame f = synth_scene(spec, 1);
  REQUIRE(f.cloud.rows() > 20);
  for (Eigen::Index i = 0; i < f.cloud.rows(); ++i) {
    CHECK(std::hypot(f.cloud(i, 0) - 8.0, f.cloud(i, 1)) <= doctest::Approx(0.3).epsilon(1e-4));
  }
}

TEST_CASE("degenerate primitives are rejected") {
  SceneSpec spec;
  spec.objects.push_back({Box{Eigen::Vector3d(5, 0, 0), Eigen::Vector3d(0, 1, 1), 0.0}, 10, true});
  CHECK_THROWS_AS(synth_scene(spec, 1), std::invalid_argument);
}

TEST_CASE("property: the same seed gives the same frame") {
  RandomSceneOptions opts;
  opts.sensor.range_noise = 0.02;
  const SyntheticFrame a = synth_scene(random_scene(5, opts), 5);
  const SyntheticFrame b = synth_scene(random_scene(5, opts), 5);
  const SyntheticFrame c = synth_scene(random_scene(5, opts), 6);
  CHECK(a.cloud == b.cloud);
  CHECK(a.truth.instances == b.truth.instances);
  CHECK_FALSE(a.cloud == c.cloud);
}

TEST_CASE("random scenes contain things and stuff") {
  const SyntheticFrame f = synth_scene(random_scene(9), 9);
  const std::set<std::uint32_t> classes(f.truth.semantics.begin(), f.truth.semantics.end());
  CHECK(classes.contains(10));
  CHECK(classes.contains(30));
  CHECK(classes.contains(40));
  CHECK(f.cloud.rows() > 50000);
}
