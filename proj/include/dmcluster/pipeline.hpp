#pragma once

#include "dmcluster/local_cluster.hpp"
#include "dmcluster/merge.hpp"
#include "dmcluster/range_image.hpp"
#include "dmcluster/types.hpp"

#include <cstdint>
#include <set>
#include <span>
#include <vector>

namespace dmc {

enum class ConditionKind { kAngle, kEuclidean };

struct PipelineConfig {
  double voxel_edge = 0.5;
  double theta_deg = 10.0;
  ProjectionConfig projection;
  std::set<std::uint32_t> thing_classes;
  bool postprocess = true;
  bool wrap = true;
  ConditionKind condition = ConditionKind::kAngle;
  double euclidean_threshold = 1.0;

  /// Defaults with the SemanticKITTI thing classes.
  static PipelineConfig kitti();
  void validate() const;
};

struct StageTimings {
  double project_ms = 0, seed_ms = 0, divide_ms = 0, merge_ms = 0, unproject_ms = 0,
         postprocess_ms = 0, total_ms = 0;
};

struct FrameDiagnostics {
  std::size_t n_points = 0;
  std::size_t n_masked = 0;
  int m = 0;  ///< local labels (seeds)
  int k = 0;  ///< final instances
  /// Fraction of off-diagonal vote cells with any vote.
  double vote_density = 0;
  DivideStats divide;
  MergeStats merge;
  StageTimings timings;
};

struct ClusterResult {
  std::vector<std::uint32_t> instances;
  FrameDiagnostics diagnostics;
};

/// Divide-and-merge instance clustering of the thing points of one frame.
/// Stuff points get instance 0, thing points dense ids 1..k (or 0 if no seed
/// reached them).
ClusterResult cluster_frame(const PointsRef& points, std::span<const std::uint32_t> semantics,
                            const PipelineConfig& cfg);

/// Same pipeline with single-pass depth clustering in place of
/// divide-and-merge.
ClusterResult cluster_frame_baseline(const PointsRef& points,
                                     std::span<const std::uint32_t> semantics,
                                     const PipelineConfig& cfg);

/// Renumbers non-zero ids to 1..k in order of first appearance.
std::uint32_t compact_instances(std::vector<std::uint32_t>& instances);

}  // namespace dmc
