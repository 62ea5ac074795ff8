#include "dmcluster/pipeline.hpp"

#include "dmcluster/baseline_ccl.hpp"
#include "dmcluster/connectivity.hpp"
#include "dmcluster/io_kitti.hpp"
#include "dmcluster/postprocess.hpp"

#include <chrono>
#include <memory>
#include <stdexcept>
#include <unordered_map>

namespace dmc {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point& t) {
  const auto now = Clock::now();
  const double ms = std::chrono::duration<double, std::milli>(now - t).count();
  t = now;
  return ms;
}

/// Runs `body` with whichever pair predicate the config selects.
template <typename Body>
auto with_condition(const RangeImage& img, const PointsRef& points, const PipelineConfig& cfg,
                    Body&& body) {
  if (cfg.condition == ConditionKind::kEuclidean) {
    return body(EuclideanCondition(img, points, cfg.euclidean_threshold));
  }
  return body(AngleCondition(img, condition_params(cfg.projection, cfg.theta_deg)));
}

struct Prepared {
  std::unique_ptr<bool[]> mask;
  std::size_t n = 0;
  std::size_t n_masked = 0;
  RangeImage img;

  std::span<const bool> mask_span() const { return {mask.get(), n}; }
};

Prepared prepare(const PointsRef& points, std::span<const std::uint32_t> semantics,
                 const PipelineConfig& cfg) {
  cfg.validate();
  check_finite(points);
  Prepared p;
  p.n = static_cast<std::size_t>(points.rows());
  if (semantics.size() != p.n) {
    throw std::invalid_argument("semantics length differs from point count");
  }
  // std::vector<bool> cannot back a span.
  p.mask = std::make_unique<bool[]>(p.n);
  for (std::size_t i = 0; i < p.n; ++i) {
    p.mask[i] = cfg.thing_classes.contains(semantics[i]);
    p.n_masked += p.mask[i];
  }
  p.img = project(points, cfg.projection, p.mask_span());
  return p;
}

void finish(const PointsRef& points, std::span<const std::uint32_t> semantics,
            const PipelineConfig& cfg, const Prepared& prep, const LabelImage& labels,
            ClusterResult& out, Clock::time_point& t) {
  const std::vector<std::int32_t> per_point = unproject_labels(prep.img, labels, prep.n, semantics);
  out.instances.assign(per_point.begin(), per_point.end());
  out.diagnostics.timings.unproject_ms = ms_since(t);

  if (cfg.postprocess) {
    out.instances = bev_merge(out.instances, semantics, points);
  }
  out.diagnostics.k = static_cast<int>(compact_instances(out.instances));
  out.diagnostics.timings.postprocess_ms = ms_since(t);
}

}  // namespace

PipelineConfig PipelineConfig::kitti() {
  PipelineConfig cfg;
  const auto things = semantic_kitti_thing_classes();
  cfg.thing_classes.insert(things.begin(), things.end());
  return cfg;
}

void PipelineConfig::validate() const {
  if (!(voxel_edge > 0)) throw std::invalid_argument("voxel edge must be positive");
  if (!(theta_deg > 0 && theta_deg < 90)) throw std::invalid_argument("theta must lie in (0, 90)");
  if (!(euclidean_threshold > 0)) throw std::invalid_argument("euclidean threshold must be positive");
  projection.validate();
}

std::uint32_t compact_instances(std::vector<std::uint32_t>& instances) {
  std::unordered_map<std::uint32_t, std::uint32_t> remap;
  for (std::uint32_t& id : instances) {
    if (id == 0) continue;
    auto [it, inserted] = remap.try_emplace(id, static_cast<std::uint32_t>(remap.size() + 1));
    id = it->second;
  }
  return static_cast<std::uint32_t>(remap.size());
}

ClusterResult cluster_frame(const PointsRef& points, std::span<const std::uint32_t> semantics,
                            const PipelineConfig& cfg) {
  const auto start = Clock::now();
  auto t = start;
  ClusterResult out;
  Prepared prep = prepare(points, semantics, cfg);
  auto& d = out.diagnostics;
  d.n_points = prep.n;
  d.n_masked = prep.n_masked;
  d.timings.project_ms = ms_since(t);

  const SeedList seeds = select_seeds(points, prep.img, prep.mask_span(), {cfg.voxel_edge});
  d.m = static_cast<int>(seeds.size());
  d.timings.seed_ms = ms_since(t);

  LocalClusterResult local = with_condition(prep.img, points, cfg, [&](const auto& condition) {
    return local_cluster(prep.img, seeds, condition, {cfg.wrap});
  });
  d.divide = local.stats;
  if (d.m > 1) {
    const auto voted = ((local.v_plus.array() + local.v_minus.array()) > 0).count();
    d.vote_density = static_cast<double>(voted) / (static_cast<double>(d.m) * (d.m - 1));
  }
  d.timings.divide_ms = ms_since(t);

  const LabelImage merged = vote_and_merge(local.v_plus, local.v_minus, local.labels, &d.merge);
  d.timings.merge_ms = ms_since(t);

  finish(points, semantics, cfg, prep, merged, out, t);
  d.timings.total_ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
  return out;
}

ClusterResult cluster_frame_baseline(const PointsRef& points,
                                     std::span<const std::uint32_t> semantics,
                                     const PipelineConfig& cfg) {
  const auto start = Clock::now();
  auto t = start;
  ClusterResult out;
  Prepared prep = prepare(points, semantics, cfg);
  auto& d = out.diagnostics;
  d.n_points = prep.n;
  d.n_masked = prep.n_masked;
  d.timings.project_ms = ms_since(t);

  const LabelImage labels = with_condition(prep.img, points, cfg, [&](const auto& condition) {
    return depth_cluster(prep.img, condition, cfg.wrap);
  });
  d.m = static_cast<int>(labels.maxCoeff());
  d.timings.divide_ms = ms_since(t);

  finish(points, semantics, cfg, prep, labels, out, t);
  d.timings.total_ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
  return out;
}

}  // namespace dmc
